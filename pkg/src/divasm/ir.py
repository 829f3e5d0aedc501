"""Machine-independent program representation and its textual format.

A program is a control-flow graph of basic blocks holding abstract
instructions over virtual temporaries.  The text format, one function per
file, UTF-8, ``#`` comments::

    func NAME
    block ID freq F [succ ID...]
    ID: [tN <-] OPCODE [tN | REG | @BLOCK | IMM]... [!branch]
    dep A -> B

Instruction ids are global and dense (0..n-1), grouped by block in order.
Operands are temporaries (``t3``), register names (``r4`` -- resolved
against the target description later), signed integer immediates, or
``@B`` symbolic block references used as branch targets.

Register operands denote values pinned to a physical register (ABI values
and loop-carried variables).  A register *def* introduces a fresh pinned
temporary; a register *use* binds to the nearest preceding def of that
register in the same block, or to a block live-in pinned temporary if there
is none.  Named temporaries are in SSA-like form: exactly one def each.

Dependencies: def-use edges within a block are added automatically with
``data`` latency class (consumer waits for the producer's result).  Explicit
``dep A -> B`` lines add ``order`` edges (B issues strictly after A) for
memory or control ordering the analyzer cannot infer.  Branch instructions
must form a suffix of their block; consecutive branches get automatic
``order`` edges so the terminal run keeps its order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "DATA",
    "ORDER",
    "Operand",
    "Instr",
    "Block",
    "Temp",
    "Program",
    "Diagnostic",
    "IrError",
    "IrSyntaxError",
    "IrSemanticError",
    "parse_program",
    "serialize_program",
    "validate",
]

# latency classes for dependency edges
DATA = "data"
ORDER = "order"

_TEMP_RE = re.compile(r"t(\d+)$")
_IMM_RE = re.compile(r"-?\d+$")
_LABEL_RE = re.compile(r"@(\d+)$")
_REG_RE = re.compile(r"[A-Za-z$][\w.$]*$")


class IrError(Exception):
    pass


class IrSyntaxError(IrError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}:{col}: {message}")
        self.line = line
        self.col = col


class IrSemanticError(IrError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: int
    message: str

    def __str__(self):
        return f"{self.code}({self.subject}): {self.message}"


@dataclass(frozen=True)
class Operand:
    """One source operand: kind is 'temp', 'imm' or 'label'."""

    kind: str
    value: int


@dataclass
class Instr:
    id: int
    opcode: str
    dst: int | None          # defined temp index, None for no def
    srcs: tuple[Operand, ...]
    is_branch: bool = False
    # (predecessor instruction id, latency class); within the same block
    deps: list[tuple[int, str]] = field(default_factory=list)

    @property
    def uses(self) -> list[int]:
        return [op.value for op in self.srcs if op.kind == "temp"]

    @property
    def defs(self) -> list[int]:
        return [] if self.dst is None else [self.dst]


@dataclass
class Block:
    id: int
    instrs: list[int]
    freq: int = 1
    succ: list[int] = field(default_factory=list)


@dataclass
class Temp:
    id: int
    name: str                 # source spelling: "t3" or a register name
    def_instr: int | None     # None for block live-in pinned temps
    uses: list[int] = field(default_factory=list)
    preassigned: str | None = None
    block: int | None = None  # home block for pinned temps, def block otherwise


@dataclass
class Program:
    name: str
    blocks: list[Block]
    instrs: list[Instr]
    temps: list[Temp]
    # explicit order edges from `dep` lines, kept for serialization
    explicit_deps: list[tuple[int, int]] = field(default_factory=list)

    @property
    def n_instrs(self) -> int:
        return len(self.instrs)

    def block_of(self, instr_id: int) -> int | None:
        for b in self.blocks:
            if instr_id in b.instrs:
                return b.id
        return None


def _tokenize(line: str) -> list[str]:
    line = line.split("#", 1)[0]
    return line.split()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.name = None
        self.blocks: list[Block] = []
        self.instrs: dict[int, Instr] = {}
        self.instr_block: dict[int, int] = {}
        self.temps: list[Temp] = []
        self.temp_by_name: dict[str, int] = {}
        # per-block map register name -> pinned temp currently holding it
        self.reg_binding: dict[str, int] = {}
        self.explicit: list[tuple[int, int]] = []
        self.cur_block: Block | None = None
        self.lineno = 0

    def err(self, msg: str, col: int = 1):
        raise IrSyntaxError(msg, self.lineno, col)

    def new_temp(self, name, def_instr, preassigned, block):
        t = Temp(len(self.temps), name, def_instr, [], preassigned, block)
        self.temps.append(t)
        return t.id

    def temp_for_name(self, name: str) -> int:
        if name not in self.temp_by_name:
            self.temp_by_name[name] = self.new_temp(name, None, None, None)
        return self.temp_by_name[name]

    def bind_reg_use(self, reg: str) -> int:
        if reg not in self.reg_binding:
            # live into the block, identity carried by the register itself
            self.reg_binding[reg] = self.new_temp(
                reg, None, reg, self.cur_block.id)
        return self.reg_binding[reg]

    def bind_reg_def(self, reg: str, instr_id: int) -> int:
        t = self.new_temp(reg, instr_id, reg, self.cur_block.id)
        self.reg_binding[reg] = t
        return t

    def parse(self) -> Program:
        for raw in self.text.splitlines():
            self.lineno += 1
            toks = _tokenize(raw)
            if not toks:
                continue
            head = toks[0]
            if head == "func":
                self.parse_func(toks)
            elif head == "block":
                self.parse_block(toks)
            elif head == "dep":
                self.parse_dep(toks)
            elif head.endswith(":") and head[:-1].isdigit():
                self.parse_instr(toks)
            else:
                self.err(f"unrecognized directive {head!r}")
        if self.name is None:
            self.err("missing 'func' header")
        return self.finish()

    def parse_func(self, toks):
        if len(toks) != 2:
            self.err("expected 'func NAME'")
        if self.name is not None:
            self.err("duplicate 'func' header")
        self.name = toks[1]

    def parse_block(self, toks):
        if len(toks) < 4 or toks[2] != "freq":
            self.err("expected 'block ID freq F [succ ...]'")
        try:
            bid = int(toks[1])
            freq = int(toks[3])
        except ValueError:
            self.err("block id and freq must be integers")
        succ: list[int] = []
        rest = toks[4:]
        if rest:
            if rest[0] != "succ":
                self.err("expected 'succ' after block frequency")
            try:
                succ = [int(t) for t in rest[1:]]
            except ValueError:
                self.err("successor ids must be integers")
        if bid != len(self.blocks):
            self.err(f"block ids must be dense and in order, expected {len(self.blocks)}")
        if freq < 1:
            self.err("block freq must be >= 1")
        self.cur_block = Block(bid, [], freq, succ)
        self.blocks.append(self.cur_block)
        self.reg_binding = {}

    def parse_dep(self, toks):
        if len(toks) != 4 or toks[2] != "->":
            self.err("expected 'dep A -> B'")
        try:
            a, b = int(toks[1]), int(toks[3])
        except ValueError:
            self.err("dep endpoints must be instruction ids")
        self.explicit.append((a, b))

    def parse_instr(self, toks):
        if self.cur_block is None:
            self.err("instruction outside of a block")
        iid = int(toks[0][:-1])
        if iid in self.instrs:
            self.err(f"duplicate instruction id {iid}")
        body = toks[1:]
        is_branch = False
        if body and body[-1] == "!branch":
            is_branch = True
            body = body[:-1]
        dst_tok = None
        if len(body) >= 2 and body[1] == "<-":
            dst_tok = body[0]
            body = body[2:]
        if not body:
            self.err("missing opcode")
        opcode, operand_toks = body[0], body[1:]

        srcs = []
        for tok in operand_toks:
            m = _TEMP_RE.match(tok)
            if m:
                srcs.append(Operand("temp", self.temp_for_name(tok)))
                continue
            m = _LABEL_RE.match(tok)
            if m:
                srcs.append(Operand("label", int(m.group(1))))
                continue
            if _IMM_RE.match(tok):
                srcs.append(Operand("imm", int(tok)))
                continue
            if _REG_RE.match(tok):
                srcs.append(Operand("temp", self.bind_reg_use(tok)))
                continue
            self.err(f"bad operand {tok!r}")

        dst = None
        if dst_tok is not None:
            if is_branch:
                self.err("branch instructions cannot define a value")
            if _TEMP_RE.match(dst_tok):
                dst = self.temp_for_name(dst_tok)
                if self.temps[dst].def_instr is not None:
                    self.err(f"temporary {dst_tok} defined more than once")
                self.temps[dst].def_instr = iid
                self.temps[dst].block = self.cur_block.id
            elif _REG_RE.match(dst_tok):
                dst = self.bind_reg_def(dst_tok, iid)
            else:
                self.err(f"bad destination {dst_tok!r}")

        instr = Instr(iid, opcode, dst, tuple(srcs), is_branch)
        for op in srcs:
            if op.kind == "temp":
                self.temps[op.value].uses.append(iid)
        self.instrs[iid] = instr
        self.instr_block[iid] = self.cur_block.id
        self.cur_block.instrs.append(iid)

    def finish(self) -> Program:
        n = len(self.instrs)
        instr_list = []
        for i in range(n):
            if i not in self.instrs:
                raise IrSemanticError(
                    [Diagnostic("SparseIds", i, f"instruction id {i} missing; ids must be dense 0..{n - 1}")])
            instr_list.append(self.instrs[i])
        prog = Program(self.name, self.blocks, instr_list, self.temps,
                       self.explicit)
        _add_dependencies(prog)
        diags = validate(prog)
        if diags:
            raise IrSemanticError(diags)
        return prog


def _add_dependencies(prog: Program) -> None:
    """Attach def-use data edges, explicit order edges and branch ordering."""
    blk_of = {}
    for b in prog.blocks:
        for i in b.instrs:
            blk_of[i] = b.id
    for instr in prog.instrs:
        instr.deps = []
    for instr in prog.instrs:
        blk = blk_of.get(instr.id)
        for t in instr.uses:
            d = prog.temps[t].def_instr
            if d is not None and d != instr.id and blk_of.get(d) == blk:
                if (d, DATA) not in instr.deps:
                    instr.deps.append((d, DATA))
    for a, b in prog.explicit_deps:
        if 0 <= b < prog.n_instrs:
            deps = prog.instrs[b].deps
            if (a, ORDER) not in deps and (a, DATA) not in deps:
                deps.append((a, ORDER))
    # terminal branch run keeps its textual order
    for block in prog.blocks:
        branches = [i for i in block.instrs if prog.instrs[i].is_branch]
        for a, b in zip(branches, branches[1:]):
            deps = prog.instrs[b].deps
            if (a, ORDER) not in deps and (a, DATA) not in deps:
                deps.append((a, ORDER))


def parse_program(text: str) -> Program:
    """Parse and validate one function; raises on syntax or semantic errors."""
    return _Parser(text).parse()


def serialize_program(prog: Program) -> str:
    """Render a program back to its canonical text form."""
    out = [f"func {prog.name}"]
    for block in prog.blocks:
        line = f"block {block.id} freq {block.freq}"
        if block.succ:
            line += " succ " + " ".join(str(s) for s in block.succ)
        out.append(line)
        for iid in block.instrs:
            instr = prog.instrs[iid]
            parts = [f"{iid}:"]
            if instr.dst is not None:
                parts += [prog.temps[instr.dst].name, "<-"]
            parts.append(instr.opcode)
            for op in instr.srcs:
                if op.kind == "temp":
                    parts.append(prog.temps[op.value].name)
                elif op.kind == "label":
                    parts.append(f"@{op.value}")
                else:
                    parts.append(str(op.value))
            if instr.is_branch:
                parts.append("!branch")
            out.append(" ".join(parts))
    for a, b in prog.explicit_deps:
        out.append(f"dep {a} -> {b}")
    return "\n".join(out) + "\n"


def validate(prog: Program) -> list[Diagnostic]:
    """Re-check every structural invariant; empty list means well-formed."""
    diags: list[Diagnostic] = []
    n = prog.n_instrs
    if not prog.blocks:
        diags.append(Diagnostic("NoBlocks", 0, "program has no blocks"))
        return diags

    seen: set[int] = set()
    next_expected = 0
    for block in prog.blocks:
        for iid in block.instrs:
            if iid != next_expected:
                diags.append(Diagnostic(
                    "SparseIds", iid,
                    f"instruction ids must be dense and grouped by block; expected {next_expected}"))
                return diags
            next_expected += 1
            seen.add(iid)
    if seen != set(range(n)):
        diags.append(Diagnostic("SparseIds", n, "instruction ids not a permutation of 0..n-1"))

    for block in prog.blocks:
        if block.freq < 1:
            diags.append(Diagnostic("BadFreq", block.id, "block freq must be >= 1"))
        for s in block.succ:
            if not 0 <= s < len(prog.blocks):
                diags.append(Diagnostic("BadSucc", block.id, f"unknown successor {s}"))
        flags = [prog.instrs[i].is_branch for i in block.instrs]
        k = len(flags) - sum(flags)
        if any(flags[:k]):
            diags.append(Diagnostic(
                "BranchNotLast", block.id,
                "branch instructions must form the terminal run of the block"))

    def_count: dict[int, int] = {t.id: 0 for t in prog.temps}
    for instr in prog.instrs:
        if instr.dst is not None:
            def_count[instr.dst] += 1
            if instr.is_branch:
                diags.append(Diagnostic("BranchDef", instr.id, "branch defines a value"))
        for t in instr.uses:
            if not 0 <= t < len(prog.temps):
                diags.append(Diagnostic("UndefinedTemp", t, f"instruction {instr.id} uses unknown temp"))
    for t in prog.temps:
        if def_count.get(t.id, 0) > 1:
            diags.append(Diagnostic("MultipleDefs", t.id, f"temp {t.name} has multiple defs"))
        if t.def_instr is None and t.preassigned is None and t.uses:
            diags.append(Diagnostic("UndefinedTemp", t.id, f"temp {t.name} used but never defined"))

    blk_of = {}
    for b in prog.blocks:
        for i in b.instrs:
            blk_of[i] = b.id
    for instr in prog.instrs:
        blk = blk_of.get(instr.id)
        for p, _kind in instr.deps:
            if blk_of.get(p) != blk:
                diags.append(Diagnostic("CrossBlockDep", instr.id, f"dependency {p}->{instr.id} crosses blocks"))

    for block in prog.blocks:
        in_block = set(block.instrs)
        adj = {i: [p for p, _ in prog.instrs[i].deps if p in in_block] for i in block.instrs}
        state: dict[int, int] = {}

        def cyclic(i: int) -> bool:
            st = state.get(i, 0)
            if st == 1:
                return True
            if st == 2:
                return False
            state[i] = 1
            if any(cyclic(p) for p in adj[i]):
                return True
            state[i] = 2
            return False

        if any(cyclic(i) for i in block.instrs):
            diags.append(Diagnostic("CyclicDeps", block.id, "dependency cycle within block"))
    return diags
