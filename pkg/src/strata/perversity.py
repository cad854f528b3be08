"""Perversity functions on the strata of a filtered complex.

A perversity assigns an integer to every stratum, zero on regular strata.
Classical Goursat-Mac table perversities depend only on codimension and obey
the growth condition p(i) <= p(i+1) <= p(i) + 1 with p(2) = 0; per-stratum
perversities are unrestricted integers (tame intersection homology and the
blown-up complex are built to handle values outside [zero, top]).
"""

from __future__ import annotations

import json

from .filtered_complex import FilteredComplex, Stratum


class UnknownStratum(KeyError):
    """Perversity queried on a stratum it does not cover."""


class Perversity:
    """Base class; concrete perversities implement value_singular()."""

    def value(self, stratum: Stratum) -> int:
        if stratum.is_regular:
            return 0
        return self.value_singular(stratum)

    def value_singular(self, stratum: Stratum) -> int:
        raise NotImplementedError

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Perversity") -> "Perversity":
        return ComboPerversity(((1, self), (1, other)))

    def __sub__(self, other: "Perversity") -> "Perversity":
        return ComboPerversity(((1, self), (-1, other)))

    def complement(self) -> "Perversity":
        """The complementary perversity top - self."""
        return ComboPerversity(((1, top()), (-1, self)))

    def leq(self, other: "Perversity", X: FilteredComplex) -> bool:
        return all(self.value(S) <= other.value(S) for S in X.strata)

    def eq_on(self, other: "Perversity", X: FilteredComplex) -> bool:
        return all(self.value(S) == other.value(S) for S in X.strata)

    def signature(self, X: FilteredComplex) -> tuple:
        """Hashable fingerprint: the values on the singular strata."""
        return tuple((S.key, self.value(S)) for S in X.singular_strata())

    def materialize(self, X: FilteredComplex) -> "StratumPerversity":
        return StratumPerversity({S.key: self.value(S)
                                  for S in X.singular_strata()})

    def to_json(self):
        raise NotImplementedError


class FormulaPerversity(Perversity):
    """Codimension formula, defined for every codim >= 1."""

    def __init__(self, name: str, func):
        self.name = name
        self.func = func

    def value_singular(self, stratum: Stratum) -> int:
        return self.func(stratum.codim)

    def to_json(self):
        return {"preset": self.name}

    def __repr__(self):
        return f"Perversity({self.name})"


class GMPerversity(Perversity):
    """Classical table perversity: values at codims 2, 3, ..., len + 1.

    Codimension-one strata are not covered (use a per-stratum perversity),
    and neither are codimensions beyond the table.
    """

    def __init__(self, table):
        self.table = tuple(int(v) for v in table)
        if self.table and self.table[0] != 0:
            raise ValueError("table perversity must start with p(2) = 0")
        for i, (a, b) in enumerate(zip(self.table, self.table[1:])):
            if not a <= b <= a + 1:
                raise ValueError(
                    f"table must grow by 0 or 1: p({i + 2})={a}, p({i + 3})={b}")

    def value_singular(self, stratum: Stratum) -> int:
        c = stratum.codim
        if c < 2:
            raise UnknownStratum(
                f"table perversity has no value at codim {c}; "
                "use a per-stratum perversity")
        if c - 2 >= len(self.table):
            raise UnknownStratum(f"table stops before codim {c}")
        return self.table[c - 2]

    def to_json(self):
        return {"gm": list(self.table)}

    def __repr__(self):
        return f"Perversity(gm={list(self.table)})"


class StratumPerversity(Perversity):
    """Explicit values per singular stratum, keyed by (level, index)."""

    def __init__(self, values: dict):
        self.values = {tuple(k): int(v) for k, v in values.items()}

    def value_singular(self, stratum: Stratum) -> int:
        try:
            return self.values[stratum.key]
        except KeyError:
            raise UnknownStratum(
                f"no value for stratum level={stratum.level} "
                f"index={stratum.index}") from None

    def to_json(self):
        return {"strata": [{"level": lv, "id": ix, "value": v}
                           for (lv, ix), v in sorted(self.values.items())]}

    def __repr__(self):
        return f"Perversity(strata={self.values})"


class ComboPerversity(Perversity):
    """Integer linear combination of perversities, evaluated stratum-wise."""

    def __init__(self, terms):
        self.terms = tuple(terms)

    def value_singular(self, stratum: Stratum) -> int:
        return sum(c * p.value(stratum) for c, p in self.terms)

    def to_json(self):
        raise TypeError("combination perversities serialize via materialize()")

    def __repr__(self):
        return f"Perversity({' + '.join(f'{c}*{p!r}' for c, p in self.terms)})"


# -- presets -----------------------------------------------------------


def zero() -> Perversity:
    return FormulaPerversity("zero", lambda c: 0)


def top() -> Perversity:
    """t(c) = c - 2, including t(1) = -1 for codimension-one strata."""
    return FormulaPerversity("top", lambda c: c - 2)


def lower_middle() -> Perversity:
    return FormulaPerversity("lower-middle", lambda c: (c - 2) // 2)


def upper_middle() -> Perversity:
    return FormulaPerversity("upper-middle", lambda c: (c - 2) - (c - 2) // 2)


def constant(value: int) -> Perversity:
    """The same value on every singular stratum."""
    return FormulaPerversity(f"constant:{value}", lambda c, v=int(value): v)


_PRESETS = {
    "zero": zero,
    "top": top,
    "lower-middle": lower_middle,
    "upper-middle": upper_middle,
}


def from_json(data) -> Perversity:
    if isinstance(data, str):
        return parse_perversity(data)
    if "preset" in data:
        name = data["preset"]
        if name in _PRESETS:
            return _PRESETS[name]()
        if name.startswith("constant:"):
            return constant(int(name.split(":", 1)[1]))
        raise ValueError(f"unknown preset {name!r}")
    if "gm" in data:
        return GMPerversity(data["gm"])
    if "strata" in data:
        return StratumPerversity(
            {(e["level"], e["id"]): e["value"] for e in data["strata"]})
    raise ValueError(f"cannot parse perversity from {data!r}")


def parse_perversity(text: str) -> Perversity:
    """Parse a preset name, an integer (constant), or inline JSON."""
    text = text.strip()
    if text in _PRESETS:
        return _PRESETS[text]()
    try:
        return constant(int(text))
    except ValueError:
        pass
    if text.startswith("{"):
        return from_json(json.loads(text))
    raise ValueError(f"cannot parse perversity {text!r}")
