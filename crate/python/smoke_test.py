"""Quick end-to-end check of the Python bindings.

Build and install first:
    pip install --no-build-isolation -e crates/python
"""

import fqsparse


def main() -> None:
    f9 = fqsparse.Field(3, 2)
    assert (f9.q, f9.modulus) == (9, [1, 0, 1])
    g = f9.generator()
    assert f9.pow(g, 8) == 1 and f9.pow(g, 4) != 1
    assert f9.mul(g, f9.inv(g)) == 1

    f47 = fqsparse.Field(47)
    poly = fqsparse.Polynomial(f47, "1 + 4x - 5x^8")
    roots = poly.roots()
    assert len(roots) == 5 and all(poly.evaluate(x) == 0 for x in roots)
    report = poly.coset_report()
    assert report["ko_bound"]["floor"] == 7 and report["c_exact"] == 1

    same = fqsparse.Polynomial(f47, [(0, 1), (1, 4), (8, -5)])
    assert same.roots() == roots

    r = fqsparse.verify_family("r", 4, 1, 3)
    assert r["passed"] and r["root_count"] == 9

    rec = fqsparse.max_roots_for_prime(23, "strict")
    assert 4 in rec["achieved_counts"]
    assert fqsparse.brute_oracle_max(23, "strict")["max_count"] == rec["max_count"]

    table = fqsparse.pn_table(4, 30)
    assert [row["p_n"] for row in table] == [3, 5, 11, 23]

    assert fqsparse.swan_resultant(3) == "-23"
    assert fqsparse.sylvester_resultant([-1, -1, 1], [-1, 2]) == "-5"
    assert fqsparse.least_split_prime(2, 100) == 11

    try:
        fqsparse.Polynomial(fqsparse.Field(10_000_019), "1 + x").roots()
    except fqsparse.CapabilityError:
        pass
    else:
        raise AssertionError("expected a capability error")

    print(f"fqsparse {fqsparse.__version__}: python smoke test passed")


if __name__ == "__main__":
    main()
