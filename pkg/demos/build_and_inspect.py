"""Build filtered spaces, inspect strata, and pick perversities.

Shows the three construction operators (cone, suspension, circle product),
the JSON round trip the CLI uses, and how allowability reacts to the
perversity. Run with: python3 demos/build_and_inspect.py
"""

import json

from strata import (
    FilteredComplex,
    StratumPerversity,
    Z,
    build_recipe,
    intersection_complex,
    is_allowable,
    library,
    top,
    zero,
)


def describe(name, X):
    counts = [len(X.simplices(k)) for k in range(X.dim + 1)]
    print(f"{name}: formal dim {X.formal_dim}, f-vector {counts}")
    for st in X.strata:
        kind = "regular" if st.is_regular else f"codim {st.codim}"
        print(f"  stratum level {st.level} #{st.index}: {kind}, "
              f"{len(st.simplices)} simplices")


def main():
    base = library("rp2")
    describe("rp2", base)
    describe("cone(rp2)", build_recipe("cone(rp2)"))
    describe("suspension(rp2)", build_recipe("suspension(rp2)"))
    describe("product_circle(cone_rp2, 3)",
             build_recipe("product_circle(cone_rp2, 3)"))

    X = build_recipe("suspension(rp2)")
    print("\nJSON round trip (what `strata make` emits):")
    blob = json.dumps(X.to_json())
    again = FilteredComplex.from_json(json.loads(blob))
    print(f"  {len(blob)} bytes, round trip equal: {again.dumps() == X.dumps()}")

    print("\nallowability at the north apex of suspension(rp2):")
    north = X.stratum_of(("N",)).key
    south = X.stratum_of(("S",)).key
    sigma = next(s for s in X.simplices(2) if "N" in s)
    for value in (0, 1):
        p = StratumPerversity({north: value, south: value})
        print(f"  triangle {sigma} with apex value {value}: "
              f"allowable = {is_allowable(X, sigma, p)}")

    print("\nhow much of the space each perversity keeps (chain ranks):")
    for label, p in (("zero", zero()), ("top", top())):
        sub = intersection_complex(X, p, Z)
        print(f"  {label}: {sub.dims()}")


if __name__ == "__main__":
    main()
