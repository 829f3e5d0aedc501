"""Toy RISC-like target description.

A target names its register file, its issue width (instructions dispatched
per cycle) and, for every abstract opcode, one or more processor
instructions that can implement it (the domain of the per-instruction
implementation choice).  Text format (``.tgt``, ``#`` comments)::

    registers r0 r1 ...
    issue_width N
    impl OPCODE NAME latency L [size S]
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["ProcInstr", "TargetDesc", "TargetError", "default_target", "load_target",
           "serialize_target"]


class TargetError(Exception):
    pass


@dataclass(frozen=True)
class ProcInstr:
    name: str
    latency: int
    size: int = 1

    def __post_init__(self):
        if self.latency < 1:
            raise TargetError(f"{self.name}: latency must be >= 1")
        if self.size < 1:
            raise TargetError(f"{self.name}: size must be >= 1")


@dataclass(frozen=True)
class TargetDesc:
    registers: tuple[str, ...]
    issue_width: int = 1
    impls: dict[str, tuple[ProcInstr, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.issue_width < 1:
            raise TargetError("issue_width must be >= 1")
        if not self.registers:
            raise TargetError("register file is empty")
        for op, lst in self.impls.items():
            if not lst:
                raise TargetError(f"opcode {op} has no implementations")

    def reg_index(self, name: str) -> int:
        try:
            return self.registers.index(name)
        except ValueError:
            raise TargetError(f"unknown register {name!r}") from None

    def impls_for(self, opcode: str) -> tuple[ProcInstr, ...]:
        try:
            return self.impls[opcode]
        except KeyError:
            raise TargetError(f"opcode {opcode!r} has no implementation") from None


_UNIT_OPS = ("add", "addi", "sub", "and", "or", "xor", "slt", "slti",
             "move", "li", "sw")
_BRANCH_OPS = ("b", "beq", "bne", "beqz", "bnez", "blez", "bgtz", "jr", "ret")


def default_target() -> TargetDesc:
    """The bundled single-issue target: 8 registers, two ``mul`` variants."""
    impls: dict[str, tuple[ProcInstr, ...]] = {
        "mul": (ProcInstr("mul", 3), ProcInstr("mul.alt", 4)),
        "lw": (ProcInstr("lw", 2),),
    }
    for op in _UNIT_OPS:
        impls[op] = (ProcInstr(op, 1),)
    for op in _BRANCH_OPS:
        impls[op] = (ProcInstr(op, 1),)
    return TargetDesc(tuple(f"r{i}" for i in range(8)), 1, impls)


def load_target(text: str) -> TargetDesc:
    """Parse a ``.tgt`` description; raises TargetError on any problem."""
    registers: tuple[str, ...] = ()
    issue_width = 1
    impls: dict[str, list[ProcInstr]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head = toks[0]
        if head == "registers":
            if len(toks) < 2:
                raise TargetError(f"line {lineno}: empty register list")
            registers = tuple(toks[1:])
        elif head == "issue_width":
            if len(toks) != 2 or not toks[1].isdigit():
                raise TargetError(f"line {lineno}: expected 'issue_width N'")
            issue_width = int(toks[1])
        elif head == "impl":
            if len(toks) < 5 or toks[3] != "latency":
                raise TargetError(
                    f"line {lineno}: expected 'impl OPCODE NAME latency L [size S]'")
            opcode, name = toks[1], toks[2]
            try:
                latency = int(toks[4])
            except ValueError:
                raise TargetError(f"line {lineno}: latency must be an integer") from None
            size = 1
            if len(toks) > 5:
                if len(toks) != 7 or toks[5] != "size":
                    raise TargetError(f"line {lineno}: trailing tokens, expected 'size S'")
                size = int(toks[6])
            if latency < 1:
                raise TargetError(f"line {lineno}: latency must be >= 1")
            impls.setdefault(opcode, []).append(ProcInstr(name, latency, size))
        else:
            raise TargetError(f"line {lineno}: unrecognized directive {head!r}")
    if not registers:
        raise TargetError("missing 'registers' line")
    return TargetDesc(registers, issue_width,
                      {op: tuple(lst) for op, lst in impls.items()})


def serialize_target(tgt: TargetDesc) -> str:
    out = ["registers " + " ".join(tgt.registers), f"issue_width {tgt.issue_width}"]
    for op in sorted(tgt.impls):
        for pi in tgt.impls[op]:
            line = f"impl {op} {pi.name} latency {pi.latency}"
            if pi.size != 1:
                line += f" size {pi.size}"
            out.append(line)
    return "\n".join(out) + "\n"
