"""Running the registered example families through their regression suite.

Each family has known closed forms (recurrence displays, B-block
corners, marginal densities); run_regression rebuilds everything from
the weight parameters and reports each comparison with its source
location and margin.
"""

from bsz2d.examples_suite import EXAMPLES, run_regression


def main():
    runs = [
        ("ex1", {"a": 0.3}),
        ("ex2", {"a": 0.6, "b": 0.3}),
        ("ex4", {"a1": 0.5, "a2": -0.3}),
    ]
    print("registered examples:", sorted(EXAMPLES))
    for example_id, params in runs:
        rep = run_regression(example_id, depth=4, **params)
        print(f"\n{example_id} {params}: {'ALL PASS' if rep.ok else 'FAILURES'}")
        for e in rep.entries:
            mark = "ok " if e.passed else "FAIL"
            print(f"  [{mark}] {e.name:<28} margin {e.margin:.2e}  ({e.location})")


if __name__ == "__main__":
    main()
