"""Descriptors for the behavior of binary injections.

A binary type says what the image relation is for each kind of input pair:

* ``straight``: both coordinates move the same way in the order,
* ``twisted``: they move in opposite ways,
* ``neq_eq``: first coordinates differ, second coordinates are equal,
* ``eq_neq``: first coordinates are equal, second coordinates differ,

plus ``order`` (which coordinate decides the order of the images) and
whether the map is increasing or decreasing along that coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import RadoError

BIN_OPS = ("min", "max", "p1", "p2")
UN_OPS = ("E", "N", "id", "minus")
ORDERS = ("p1", "p2")
NONCANON = "non-canonical"

_BIN_ALIASES = {"min": "min", "max": "max", "p1": "p1", "p2": "p2"}
_UN_ALIASES = {"E": "E", "N": "N", "id": "id", "minus": "minus", "-": "minus"}


def apply_bin(op: str, r1: bool, r2: bool) -> bool:
    """Image relation (True for an edge) under min/max/p1/p2 of two input relations."""
    if op == "min":
        return r1 and r2
    if op == "max":
        return r1 or r2
    if op == "p1":
        return r1
    if op == "p2":
        return r2
    raise RadoError(f"unknown binary behavior {op!r}")


def apply_un(op: str, r: bool) -> bool:
    if op == "E":
        return True
    if op == "N":
        return False
    if op == "id":
        return r
    if op == "minus":
        return not r
    raise RadoError(f"unknown unary behavior {op!r}")


_DUAL = {"min": "max", "max": "min", "p1": "p1", "p2": "p2", "E": "N", "N": "E", "id": "id", "minus": "minus"}


@dataclass(frozen=True)
class BinaryType:
    straight: str
    twisted: str
    neq_eq: str
    eq_neq: str
    order: str = "p1"
    increasing: bool = True

    def __post_init__(self):
        for name, allowed in (
            ("straight", BIN_OPS),
            ("twisted", BIN_OPS),
            ("neq_eq", UN_OPS),
            ("eq_neq", UN_OPS),
            ("order", ORDERS),
        ):
            val = getattr(self, name)
            if val not in allowed and val != NONCANON:
                raise RadoError(f"{name} must be one of {allowed}, got {val!r}")

    @property
    def canonical(self) -> bool:
        return NONCANON not in (self.straight, self.twisted, self.neq_eq, self.eq_neq, self.order)

    def behavior(self) -> tuple[str, str, str, str]:
        """The four relational fields, ignoring order."""
        return (self.straight, self.twisted, self.neq_eq, self.eq_neq)

    def dual(self) -> BinaryType:
        return replace(
            self,
            straight=_DUAL.get(self.straight, self.straight),
            twisted=_DUAL.get(self.twisted, self.twisted),
            neq_eq=_DUAL.get(self.neq_eq, self.neq_eq),
            eq_neq=_DUAL.get(self.eq_neq, self.eq_neq),
        )

    def swap_args(self) -> BinaryType:
        """Type of f(v, u) given the type of f(u, v)."""
        flip = {"p1": "p2", "p2": "p1"}
        return replace(
            self,
            straight=flip.get(self.straight, self.straight),
            twisted=flip.get(self.twisted, self.twisted),
            neq_eq=self.eq_neq,
            eq_neq=self.neq_eq,
            order=flip.get(self.order, self.order),
        )

    def to_json(self) -> dict:
        return {
            "straight": self.straight,
            "twisted": self.twisted,
            "neq_eq": self.neq_eq,
            "eq_neq": self.eq_neq,
            "order": self.order,
            "increasing": self.increasing,
        }

    @classmethod
    def from_json(cls, d: dict) -> BinaryType:
        return cls(d["straight"], d["twisted"], d["neq_eq"], d["eq_neq"], d.get("order", "p1"), d.get("increasing", True))

    def short(self) -> str:
        s = f"{self.straight}/{self.twisted} {self.neq_eq}/{self.eq_neq} {self.order}"
        return s if self.increasing else s + " dec"

    @classmethod
    def parse(cls, text: str) -> BinaryType:
        """Parse ``straight,twisted,neq_eq,eq_neq[,order[,inc|dec]]``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if len(parts) < 4 or len(parts) > 6:
            raise RadoError(f"cannot parse binary type {text!r}")
        try:
            s, t = _BIN_ALIASES[parts[0]], _BIN_ALIASES[parts[1]]
            a, b = _UN_ALIASES[parts[2]], _UN_ALIASES[parts[3]]
        except KeyError as exc:
            raise RadoError(f"unknown symbol {exc.args[0]!r} in {text!r}") from None
        order = parts[4] if len(parts) > 4 else "p1"
        inc = True
        if len(parts) > 5:
            if parts[5] not in ("inc", "dec"):
                raise RadoError(f"orientation must be inc or dec, got {parts[5]!r}")
            inc = parts[5] == "inc"
        return cls(s, t, a, b, order, inc)


# alias used by the constructors; a spec is just a fully canonical type
BinaryTypeSpec = BinaryType
