"""Catalog of builtin functions: arity bounds, signature tags, conditional flags."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class BuiltinSpec:
    name: str
    min_arity: int
    max_arity: int
    signature: str = "any"  # coarse value-signature tag: numeric | logical | any
    is_conditional: bool = False


@dataclass
class BuiltinCatalog:
    functions: dict[str, BuiltinSpec] = field(default_factory=dict)

    def add(self, spec: BuiltinSpec) -> None:
        self.functions[spec.name] = spec

    def get(self, name: str) -> BuiltinSpec | None:
        return self.functions.get(name.upper())

    def __contains__(self, name: str) -> bool:
        return name.upper() in self.functions


def default_catalog() -> BuiltinCatalog:
    cat = BuiltinCatalog()
    many = 255
    for spec in [
        BuiltinSpec("SUM", 1, many, "numeric"),
        BuiltinSpec("MIN", 1, many, "numeric"),
        BuiltinSpec("MAX", 1, many, "numeric"),
        BuiltinSpec("COUNT", 1, many, "numeric"),
        BuiltinSpec("AVERAGE", 1, many, "numeric"),
        BuiltinSpec("IF", 2, 3, "any", is_conditional=True),
        BuiltinSpec("AND", 1, many, "logical"),
        BuiltinSpec("OR", 1, many, "logical"),
        BuiltinSpec("NOT", 1, 1, "logical"),
        BuiltinSpec("LOOKUP", 2, 3, "any"),
        BuiltinSpec("INDIRECT", 1, 2, "any"),
        BuiltinSpec("OFFSET", 3, 5, "any"),
    ]:
        cat.add(spec)
    return cat


DEFAULT_CATALOG = default_catalog()

# Parsed and counted, but their dynamic references defeat static dependency
# extraction; the evaluator refuses them and reports flag any occurrence.
DYNAMIC_REFERENCE_FUNCTIONS = frozenset({"LOOKUP", "INDIRECT", "OFFSET"})
