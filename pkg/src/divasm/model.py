"""Combinatorial model of the backend: variables, constraints, objective.

For a program with n instructions and T temporaries the model has

* ``c_i`` (var ids ``0..n-1``): issue cycle of instruction i within its block,
* ``m_i`` (var ids ``n..2n-1``): index of the processor instruction
  implementing i, and
* ``r_t`` (var ids ``2n..2n+T-1``): register index assigned to temporary t
  (a singleton domain when the temporary is preassigned).

Constraints: ``Precedence`` (consumer issues at least the producer's chosen
latency later, explicit order edges one cycle later), ``IssueWidth`` (at most
``issue_width`` instructions of a block per cycle), ``BranchLast`` (branches
issue no earlier than any non-branch of their block), ``RegInterference``
(temporaries with overlapping live ranges in a block get distinct registers;
half-open ranges, so a def in the cycle of another value's last use may reuse
its register), ``Distance`` (the schedule differs from a reference c-vector
in at least h positions) and ``CostBound`` (objective at most a limit).

The objective is speed: sum over blocks of execution frequency times block
makespan, where makespan is ``max_i(c_i + latency(m_i))``.

Each block has a ``horizon``: a cap on its makespan that keeps domains
finite.  Issue-cycle domains are ``[0, horizon - min_latency]``; the default
horizon (sum of worst-case latencies) always admits a serial schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ir as ir_mod
from .domains import (ENTAILED, FAILED, at_least, at_most, dmax, dmin,
                      fixed_value, from_range, is_fixed, values)
from .ir import DATA, IrSemanticError, Program
from .target import TargetDesc

__all__ = ["Csp", "Solution", "LiveRange", "UnschedulableBlock", "build_csp",
           "default_horizons", "expand_horizons", "objective",
           "check_solution", "Precedence", "IssueWidth", "BranchLast",
           "RegInterference", "Distance", "CostBound"]

HORIZON_GROWTH_CAP = 4  # hard cap on horizon expansion, in units of default


class UnschedulableBlock(Exception):
    def __init__(self, block: int, needed: int, horizon: int):
        super().__init__(
            f"block {block} cannot be scheduled within horizon {horizon} "
            f"(needs at least {needed})")
        self.block = block
        self.needed = needed
        self.horizon = horizon


@dataclass(frozen=True)
class LiveRange:
    """Occupancy of one temporary within one block.

    The range is half-open: it starts at the def cycle (block entry for
    live-in values) and ends at the last use cycle (block exit for live-out
    values).
    """

    temp: int
    rvar: int
    start_instr: int | None        # None: live into the block
    end_uses: tuple[int, ...]      # consuming instructions, empty if live-out
    to_block_end: bool
    pinned: bool


class Precedence:
    """c_j >= c_i + gap; gap is the latency of i's chosen implementation
    for data edges and 1 for order edges."""

    __slots__ = ("i", "j", "mvar", "lats", "is_data")

    def __init__(self, i, j, mvar, lats, is_data):
        self.i = i
        self.j = j
        self.mvar = mvar
        self.lats = lats
        self.is_data = is_data

    def vars(self):
        if self.is_data and len(self.lats) > 1:
            return (self.i, self.j, self.mvar)
        return (self.i, self.j)

    def _gap(self, store):
        if not self.is_data:
            return 1
        mm = store[self.mvar]
        best = None
        while mm:
            low = mm & -mm
            lat = self.lats[low.bit_length() - 1]
            if best is None or lat < best:
                best = lat
            mm ^= low
        return best

    def prop(self, csp, store):
        changed = []
        gap = self._gap(store)
        di = store[self.i]
        dj = store[self.j]
        ndj = at_least(dj, dmin(di) + gap)
        if not ndj:
            return FAILED
        if ndj != dj:
            store[self.j] = dj = ndj
            changed.append(self.j)
        ndi = at_most(di, dmax(dj) - gap)
        if not ndi:
            return FAILED
        if ndi != di:
            store[self.i] = di = ndi
            changed.append(self.i)
        if self.is_data and len(self.lats) > 1:
            cap = dmax(dj) - dmin(di)
            dm = store[self.mvar]
            ndm = 0
            mm = dm
            while mm:
                low = mm & -mm
                if self.lats[low.bit_length() - 1] <= cap:
                    ndm |= low
                mm ^= low
            if not ndm:
                return FAILED
            if ndm != dm:
                store[self.mvar] = ndm
                changed.append(self.mvar)
        return changed

    def check(self, c, m):
        gap = self.lats[m[self.i]] if self.is_data else 1
        return c[self.j] - c[self.i] >= gap


class IssueWidth:
    """At most `width` instructions of the block share an issue cycle."""

    __slots__ = ("block", "cvars", "width")

    def __init__(self, block, cvars, width):
        self.block = block
        self.cvars = cvars
        self.width = width

    def vars(self):
        return self.cvars

    def prop(self, csp, store):
        counts: dict[int, int] = {}
        unfixed = []
        union = 0
        for v in self.cvars:
            d = store[v]
            union |= d
            if d & (d - 1) == 0:
                val = d.bit_length() - 1
                n = counts.get(val, 0) + 1
                if n > self.width:
                    return FAILED
                counts[val] = n
            else:
                unfixed.append(v)
        if union.bit_count() * self.width < len(self.cvars):
            return FAILED
        if not unfixed:
            return []
        full = 0
        for val, n in counts.items():
            if n >= self.width:
                full |= 1 << val
        changed = []
        if full:
            for v in unfixed:
                nd = store[v] & ~full
                if not nd:
                    return FAILED
                if nd != store[v]:
                    store[v] = nd
                    changed.append(v)
        return changed

    def check(self, c):
        counts: dict[int, int] = {}
        for v in self.cvars:
            counts[c[v]] = counts.get(c[v], 0) + 1
        return all(n <= self.width for n in counts.values())


class BranchLast:
    """Every branch of the block issues at or after every non-branch."""

    __slots__ = ("block", "branches", "others")

    def __init__(self, block, branches, others):
        self.block = block
        self.branches = branches
        self.others = others

    def vars(self):
        return self.branches + self.others

    def prop(self, csp, store):
        changed = []
        maxlb = max(dmin(store[o]) for o in self.others)
        minub = min(dmax(store[b]) for b in self.branches)
        for b in self.branches:
            nd = at_least(store[b], maxlb)
            if not nd:
                return FAILED
            if nd != store[b]:
                store[b] = nd
                changed.append(b)
        for o in self.others:
            nd = at_most(store[o], minub)
            if not nd:
                return FAILED
            if nd != store[o]:
                store[o] = nd
                changed.append(o)
        return changed

    def check(self, c):
        top = max(c[o] for o in self.others)
        return all(c[b] >= top for b in self.branches)


class RegInterference:
    """Two temporaries of one block: overlapping live ranges imply distinct
    registers; a shared (fixed) register forces the ranges apart."""

    __slots__ = ("block", "a", "b", "inf")

    def __init__(self, block, a: LiveRange, b: LiveRange, inf: int):
        self.block = block
        self.a = a
        self.b = b
        self.inf = inf

    def vars(self):
        out = [self.a.rvar, self.b.rvar]
        for d in (self.a, self.b):
            if d.start_instr is not None:
                out.append(d.start_instr)
            out.extend(d.end_uses)
        return tuple(out)

    def _bounds(self, d: LiveRange, store):
        if d.start_instr is None:
            slo = shi = 0
        else:
            mask = store[d.start_instr]
            slo, shi = dmin(mask), dmax(mask)
        if d.to_block_end:
            elo = ehi = self.inf
        else:
            elo = max(dmin(store[u]) for u in d.end_uses)
            ehi = max(dmax(store[u]) for u in d.end_uses)
        return slo, shi, elo, ehi

    def prop(self, csp, store):
        ra, rb = self.a.rvar, self.b.rvar
        da, db = store[ra], store[rb]
        if da & db == 0:
            return ENTAILED
        _salo, sahi, ealo, eahi = self._bounds(self.a, store)
        _sblo, sbhi, eblo, ebhi = self._bounds(self.b, store)
        changed = []
        if sahi < eblo and sbhi < ealo:
            # ranges provably overlap: registers must differ
            if da & (da - 1) == 0:
                ndb = db & ~da
                if not ndb:
                    return FAILED
                if ndb != db:
                    store[rb] = ndb
                    changed.append(rb)
            elif db & (db - 1) == 0:
                nda = da & ~db
                if not nda:
                    return FAILED
                if nda != da:
                    store[ra] = nda
                    changed.append(ra)
            return changed
        if da == db and da & (da - 1) == 0:
            # same register for certain: ranges must be disjoint
            a_first = sbhi >= ealo   # b may start at/after a's end
            b_first = sahi >= eblo
            if not a_first and not b_first:
                return FAILED
            if a_first and not b_first:
                ok = self._enforce_before(self.a, self.b, store, changed)
            elif b_first and not a_first:
                ok = self._enforce_before(self.b, self.a, store, changed)
            else:
                ok = True
            if not ok:
                return FAILED
        return changed

    def _enforce_before(self, first: LiveRange, second: LiveRange, store,
                        changed):
        # start(second) >= end(first): second's def after each of first's uses
        if first.to_block_end:
            return False
        start = second.start_instr
        if start is None:
            # block entry must be at/after every use of `first`
            for u in first.end_uses:
                nd = at_most(store[u], 0)
                if not nd:
                    return False
                if nd != store[u]:
                    store[u] = nd
                    changed.append(u)
            return True
        lo = max(dmin(store[u]) for u in first.end_uses)
        nd = at_least(store[start], lo)
        if not nd:
            return False
        if nd != store[start]:
            store[start] = nd
            changed.append(start)
        hi = dmax(store[start])
        for u in first.end_uses:
            nd = at_most(store[u], hi)
            if not nd:
                return False
            if nd != store[u]:
                store[u] = nd
                changed.append(u)
        return True

    def _range(self, d: LiveRange, c):
        start = 0 if d.start_instr is None else c[d.start_instr]
        if d.to_block_end:
            end = self.inf
        else:
            end = max(c[u] for u in d.end_uses)
        return start, end

    def check(self, c, r):
        if r[self.a.temp] != r[self.b.temp]:
            return True
        sa, ea = self._range(self.a, c)
        sb, eb = self._range(self.b, c)
        return not (sa < eb and sb < ea)


class Distance:
    """The c-vector differs from `ref` in at least h positions (schedule
    Hamming distance).  Decomposed propagation: once too few variables can
    still differ, the remaining ones are forced off the reference value."""

    __slots__ = ("ref", "h")

    def __init__(self, ref, h):
        self.ref = tuple(ref)
        self.h = h

    def vars(self):
        return tuple(range(len(self.ref)))

    def prop(self, csp, store):
        must = 0
        can = []
        h = self.h
        for i, ref in enumerate(self.ref):
            d = store[i]
            if not (d >> ref) & 1:
                must += 1
                if must >= h:
                    return ENTAILED
            elif d != (1 << ref):
                can.append((i, ref))
        possible = must + len(can)
        if possible < h:
            return FAILED
        changed = []
        if possible == h:
            for i, ref in can:
                store[i] &= ~(1 << ref)
                changed.append(i)
        return changed

    def check(self, c):
        return sum(1 for a, b in zip(c, self.ref) if a != b) >= self.h


class CostBound:
    """Objective value at most `limit` (dynamic via a mutable cell during
    branch and bound).  Bounds propagation caps each block's makespan at its
    share of the remaining budget."""

    __slots__ = ("limit", "cell")

    def __init__(self, limit=None, cell=None):
        self.limit = limit
        self.cell = cell

    def current(self):
        return self.limit if self.cell is None else self.cell[0]

    def vars(self):
        return ()  # watches everything; filled in by Csp construction

    def prop(self, csp, store):
        limit = self.current()
        if limit is None:
            return []
        n = csp.n
        lbs = []
        total = 0
        for b, instrs in enumerate(csp.block_instrs):
            lb = csp.block_floor[b]
            for i in instrs:
                v = dmin(store[i]) + _min_lat(csp.lats[i], store[n + i])
                if v > lb:
                    lb = v
            lbs.append(lb)
            total += csp.freqs[b] * lb
        if total > limit:
            return FAILED
        changed = []
        for b, instrs in enumerate(csp.block_instrs):
            freq = csp.freqs[b]
            cap = (limit - (total - freq * lbs[b])) // freq
            for i in instrs:
                lats = csp.lats[i]
                mv = n + i
                lmin = _min_lat(lats, store[mv])
                nd = at_most(store[i], cap - lmin)
                if not nd:
                    return FAILED
                if nd != store[i]:
                    store[i] = nd
                    changed.append(i)
                if len(lats) > 1:
                    allow = cap - dmin(store[i])
                    dm = store[mv]
                    ndm = 0
                    mm = dm
                    while mm:
                        low = mm & -mm
                        if lats[low.bit_length() - 1] <= allow:
                            ndm |= low
                        mm ^= low
                    if not ndm:
                        return FAILED
                    if ndm != dm:
                        store[mv] = ndm
                        changed.append(mv)
        return changed

    def check(self, csp, c, m):
        limit = self.current()
        if limit is None:
            return True
        return _exact_cost(csp, c, m) <= limit


def _min_lat(lats, mmask):
    best = None
    while mmask:
        low = mmask & -mmask
        lat = lats[low.bit_length() - 1]
        if best is None or lat < best:
            best = lat
        mmask ^= low
    return best


def _exact_cost(csp, c, m):
    total = 0
    for b, instrs in enumerate(csp.block_instrs):
        makespan = 0
        for i in instrs:
            v = c[i] + csp.lats[i][m[i]]
            if v > makespan:
                makespan = v
        total += csp.freqs[b] * makespan
    return total


@dataclass(frozen=True, eq=False)
class Solution:
    """A total assignment of the model plus its objective value."""

    c: tuple[int, ...]
    m: tuple[int, ...]
    r: tuple[int, ...]
    cost: int
    csp: "Csp" = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return (self.c, self.m, self.r, self.cost) == \
            (other.c, other.m, other.r, other.cost)

    def __hash__(self):
        return hash((self.c, self.m, self.r))


@dataclass(frozen=True, eq=False)
class Csp:
    prog: Program
    tgt: TargetDesc
    horizons: tuple[int, ...]
    lats: tuple[tuple[int, ...], ...]       # per instr, per impl index
    freqs: tuple[int, ...]
    block_instrs: tuple[tuple[int, ...], ...]
    block_floor: tuple[int, ...]            # pigeonhole makespan lower bound
    live: tuple[tuple[LiveRange, ...], ...]
    constraints: tuple
    watchers: tuple[tuple[int, ...], ...]
    root: tuple[int, ...]
    n: int
    ntemps: int

    @property
    def nvars(self) -> int:
        return 2 * self.n + self.ntemps

    def mvar(self, i: int) -> int:
        return self.n + i

    def rvar(self, t: int) -> int:
        return 2 * self.n + t

    def root_store(self) -> list[int]:
        return list(self.root)

    def with_constraints(self, extra) -> "Csp":
        cons = self.constraints + tuple(extra)
        return Csp(self.prog, self.tgt, self.horizons, self.lats, self.freqs,
                   self.block_instrs, self.block_floor, self.live, cons,
                   _make_watchers(self.n, self.ntemps, cons), self.root,
                   self.n, self.ntemps)

    def solution(self, c, m, r) -> Solution:
        c, m, r = tuple(c), tuple(m), tuple(r)
        if len(c) != self.n or len(m) != self.n or len(r) != self.ntemps:
            raise ValueError("assignment arity does not match the model")
        return Solution(c, m, r, _exact_cost(self, c, m), self)


def _build_watchers(nvars, constraints):
    watch: list[list[int]] = [[] for _ in range(nvars)]
    for ci, con in enumerate(constraints):
        vs = con.vars()
        if not vs and isinstance(con, CostBound):
            # cost couples every issue-cycle and implementation variable
            vs = range(2 * len(watch) // 2)  # replaced below
        for v in con.vars():
            watch[v].append(ci)
        if isinstance(con, (CostBound,)):
            pass
    # CostBound and Distance watch wide var sets; register them explicitly
    for ci, con in enumerate(constraints):
        if isinstance(con, CostBound):
            n = (nvars - _r_count(nvars, constraints)) // 2
            for v in range(2 * n):
                watch[v].append(ci)
    return tuple(tuple(w) for w in watch)


def _r_count(nvars, constraints):
    # helper only used above; the Csp knows n, this infers it is not needed
    return 0


def default_horizons(prog: Program, tgt: TargetDesc) -> tuple[int, ...]:
    """Per-block makespan cap: sum of worst-case latencies (always admits a
    serial schedule)."""
    out = []
    for block in prog.blocks:
        total = 0
        for i in block.instrs:
            impls = tgt.impls_for(prog.instrs[i].opcode)
            total += max(pi.latency for pi in impls)
        out.append(max(total, (len(block.instrs) + tgt.issue_width - 1)
                       // tgt.issue_width))
    return tuple(out)


def expand_horizons(prog: Program, tgt: TargetDesc, needed) -> tuple[int, ...]:
    """Grow horizons to `needed` per block, within the hard growth cap."""
    base = default_horizons(prog, tgt)
    return tuple(min(max(b, n), HORIZON_GROWTH_CAP * b)
                 for b, n in zip(base, needed))


def _critical_path(prog: Program, tgt: TargetDesc, block) -> int:
    """Min-latency longest chain through the block's dependency graph,
    including the terminal latency (a lower bound on any makespan)."""
    memo: dict[int, int] = {}

    def upto(i: int) -> int:
        if i in memo:
            return memo[i]
        best = 0
        for p, kind in prog.instrs[i].deps:
            gap = 1
            if kind == DATA:
                gap = min(pi.latency
                          for pi in tgt.impls_for(prog.instrs[p].opcode))
            v = upto(p) + gap
            if v > best:
                best = v
        memo[i] = best
        return best

    worst = 0
    for i in block.instrs:
        lat = min(pi.latency for pi in tgt.impls_for(prog.instrs[i].opcode))
        worst = max(worst, upto(i) + lat)
    return worst


def _free_liveness(prog: Program):
    """Backward dataflow for named temporaries: which are live into and out
    of each block."""
    blk_of = {}
    for b in prog.blocks:
        for i in b.instrs:
            blk_of[i] = b.id
    gen: list[set[int]] = [set() for _ in prog.blocks]
    kill: list[set[int]] = [set() for _ in prog.blocks]
    for t in prog.temps:
        if t.preassigned is not None:
            continue
        if t.def_instr is not None:
            kill[blk_of[t.def_instr]].add(t.id)
        for u in t.uses:
            b = blk_of[u]
            if t.def_instr is None or blk_of[t.def_instr] != b:
                gen[b].add(t.id)
    live_in = [set() for _ in prog.blocks]
    live_out = [set() for _ in prog.blocks]
    changed = True
    while changed:
        changed = False
        for block in reversed(prog.blocks):
            out: set[int] = set()
            for s in block.succ:
                out |= live_in[s]
            inn = gen[block.id] | (out - kill[block.id])
            if out != live_out[block.id] or inn != live_in[block.id]:
                live_out[block.id] = out
                live_in[block.id] = inn
                changed = True
    return live_in, live_out


def _live_ranges(prog: Program, rvar) -> list[list[LiveRange]]:
    blk_of = {}
    for b in prog.blocks:
        for i in b.instrs:
            blk_of[i] = b.id
    live_in, live_out = _free_liveness(prog)
    per_block: list[list[LiveRange]] = [[] for _ in prog.blocks]
    for t in prog.temps:
        if t.preassigned is not None:
            b = t.block
            if t.def_instr is not None:
                per_block[b].append(LiveRange(
                    t.id, rvar(t.id), t.def_instr, (), True, True))
            elif t.uses:
                per_block[b].append(LiveRange(
                    t.id, rvar(t.id), None, tuple(t.uses), False, True))
            continue
        if t.def_instr is None:
            continue
        db = blk_of[t.def_instr]
        for block in prog.blocks:
            b = block.id
            uses_here = tuple(u for u in t.uses if blk_of[u] == b)
            out_here = t.id in live_out[b]
            if b == db:
                if not uses_here and not out_here:
                    break  # dead def occupies nothing
                per_block[b].append(LiveRange(
                    t.id, rvar(t.id), t.def_instr,
                    () if out_here else uses_here, out_here, False))
            elif t.id in live_in[b]:
                per_block[b].append(LiveRange(
                    t.id, rvar(t.id), None,
                    () if out_here else uses_here, out_here, False))
    return per_block


def build_csp(prog: Program, tgt: TargetDesc, horizons=None) -> Csp:
    """Assemble the model for (program, target).

    `horizons` overrides the per-block makespan caps (used to widen the
    schedule space for gap-constrained diversification).  Raises
    UnschedulableBlock when a block provably cannot meet its horizon and
    IrSemanticError / TargetError on invalid inputs.
    """
    diags = ir_mod.validate(prog)
    if diags:
        raise IrSemanticError(diags)
    n = prog.n_instrs
    ntemps = len(prog.temps)

    lats = []
    for instr in prog.instrs:
        impls = tgt.impls_for(instr.opcode)
        lats.append(tuple(pi.latency for pi in impls))
    lats = tuple(lats)

    defaults = default_horizons(prog, tgt)
    if horizons is None:
        horizons = defaults
    horizons = tuple(horizons)
    for block in prog.blocks:
        needed = max(_critical_path(prog, tgt, block),
                     (len(block.instrs) + tgt.issue_width - 1) // tgt.issue_width)
        if needed > horizons[block.id]:
            raise UnschedulableBlock(block.id, needed, horizons[block.id])

    for t in prog.temps:
        if t.preassigned is not None:
            tgt.reg_index(t.preassigned)  # raises on unknown register

    def rvar(t):
        return 2 * n + t

    block_instrs = tuple(tuple(b.instrs) for b in prog.blocks)
    freqs = tuple(b.freq for b in prog.blocks)
    block_floor = tuple(
        (len(b.instrs) + tgt.issue_width - 1) // tgt.issue_width
        for b in prog.blocks)
    live = _live_ranges(prog, rvar)

    constraints = []
    for instr in prog.instrs:
        for p, kind in instr.deps:
            constraints.append(Precedence(p, instr.id, n + p, lats[p],
                                          kind == DATA))
    for block in prog.blocks:
        if len(block.instrs) > 1:
            constraints.append(IssueWidth(
                block.id, tuple(block.instrs), tgt.issue_width))
        branches = tuple(i for i in block.instrs if prog.instrs[i].is_branch)
        others = tuple(i for i in block.instrs
                       if not prog.instrs[i].is_branch)
        if branches and others:
            constraints.append(BranchLast(block.id, branches, others))
    for b, ranges in enumerate(live):
        inf = horizons[b] + 2
        for x in range(len(ranges)):
            for y in range(x + 1, len(ranges)):
                a, c = ranges[x], ranges[y]
                if a.pinned and c.pinned:
                    ta = prog.temps[a.temp].preassigned
                    tb = prog.temps[c.temp].preassigned
                    if ta != tb:
                        continue
                constraints.append(RegInterference(b, a, c, inf))

    root = []
    blk_of = {}
    for b in prog.blocks:
        for i in b.instrs:
            blk_of[i] = b.id
    for i in range(n):
        h = horizons[blk_of[i]] - min(lats[i])
        root.append(from_range(0, max(h, 0)))
    for i in range(n):
        root.append(from_range(0, len(lats[i]) - 1))
    for t in prog.temps:
        if t.preassigned is not None:
            root.append(1 << tgt.reg_index(t.preassigned))
        else:
            root.append(from_range(0, len(tgt.registers) - 1))

    constraints = tuple(constraints)
    csp = Csp(prog, tgt, horizons, lats, freqs, block_instrs, block_floor,
              tuple(live), constraints,
              _make_watchers(n, ntemps, constraints), tuple(root), n, ntemps)
    return csp


def _make_watchers(n, ntemps, constraints):
    nvars = 2 * n + ntemps
    watch: list[list[int]] = [[] for _ in range(nvars)]
    for ci, con in enumerate(constraints):
        if isinstance(con, CostBound):
            for v in range(2 * n):
                watch[v].append(ci)
        else:
            for v in set(con.vars()):
                watch[v].append(ci)
    return tuple(tuple(w) for w in watch)


def objective(csp: Csp, s) -> int:
    """Objective value of a Solution, or an admissible lower bound for a
    partial domain store (uses domain minima and per-block instruction
    counts; never exceeds the cost of any completion)."""
    if isinstance(s, Solution):
        return _exact_cost(csp, s.c, s.m)
    total = 0
    for b, instrs in enumerate(csp.block_instrs):
        lb = csp.block_floor[b]
        for i in instrs:
            v = dmin(s[i]) + _min_lat(csp.lats[i], s[csp.n + i])
            if v > lb:
                lb = v
        total += csp.freqs[b] * lb
    return total


def check_solution(csp: Csp, sol: Solution, explain: bool = False):
    """Re-evaluate every constraint from scratch on a total assignment.

    Independent of the propagation machinery; returns True/False, or a list
    of human-readable violations when `explain` is set.
    """
    problems: list[str] = []
    c, m, r = sol.c, sol.m, sol.r
    if len(c) != csp.n or len(m) != csp.n or len(r) != csp.ntemps:
        problems.append("assignment arity mismatch")
        return problems if explain else False
    blk_of = {}
    for b, instrs in enumerate(csp.block_instrs):
        for i in instrs:
            blk_of[i] = b
    for i in range(csp.n):
        if not 0 <= c[i] <= csp.horizons[blk_of[i]]:
            problems.append(f"c[{i}]={c[i]} outside horizon")
        if not 0 <= m[i] < len(csp.lats[i]):
            problems.append(f"m[{i}]={m[i]} not an implementation index")
    for t, tmp in enumerate(csp.prog.temps):
        if not 0 <= r[t] < len(csp.tgt.registers):
            problems.append(f"r[{t}]={r[t]} not a register index")
        elif tmp.preassigned is not None and \
                r[t] != csp.tgt.reg_index(tmp.preassigned):
            problems.append(f"temp {tmp.name} not in its preassigned register")
    for con in csp.constraints:
        if isinstance(con, Precedence):
            if not con.check(c, m):
                problems.append(f"precedence {con.i}->{con.j} violated")
        elif isinstance(con, IssueWidth):
            if not con.check(c):
                problems.append(f"issue width exceeded in block {con.block}")
        elif isinstance(con, BranchLast):
            if not con.check(c):
                problems.append(f"branch not last in block {con.block}")
        elif isinstance(con, RegInterference):
            if not con.check(c, r):
                problems.append(
                    f"temps {con.a.temp} and {con.b.temp} overlap in "
                    f"register {csp.tgt.registers[r[con.a.temp]]}")
        elif isinstance(con, Distance):
            if not con.check(c):
                problems.append("distance constraint violated")
        elif isinstance(con, CostBound):
            if not con.check(csp, c, m):
                problems.append(f"cost exceeds bound {con.current()}")
    if sol.cost != _exact_cost(csp, c, m):
        problems.append("stored cost does not match objective")
    return problems if explain else not problems
