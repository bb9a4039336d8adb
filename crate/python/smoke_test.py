"""Smoke test for the monictd Python module."""

import json
from fractions import Fraction

import monictd


def main():
    x = monictd.Polynomial([0, 1])
    assert x.degree == 1
    lo, hi = monictd.Polynomial([0, 1, -1]).supnorm("0,1")
    assert Fraction(lo) <= Fraction(1, 4) <= Fraction(hi)

    assert monictd.bmax_bounds(3) == ("7/18", "12/25")
    assert monictd.farey_scan(21) == []
    lo, hi = monictd.extra_lower_bound("33/100")
    assert Fraction(lo) <= Fraction(3, 11) <= Fraction(hi)

    q, a_d, d = monictd.max_obstruction("0,0.303", 2, 8)
    assert (q, a_d, d) == ([-1, 4], 4, 1)

    factors = monictd.factor_search("0,1", [-1, 2], k=8, rounds=1)
    assert [0, 1] in factors and [-1, 1] in factors

    alpha, m, rounds, converged = monictd.optimize("0,1", [[0, 1], [-1, 1]], [-1, 2])
    assert alpha == ["1/2", "1/2"] and converged
    assert monictd.rationalize_exponents(["4/7", "47/224", "7/32"], [1, 5, 7], 1000) == [640, 47, 35]

    p3 = monictd.WeightedProduct([([0, 1], 7), ([1, -3, 1], 1)])
    assert p3.total_degree == 9
    cert = monictd.verify_attaining(p3, "0,7/18", 3)
    assert json.loads(cert)["verdict"] == "certified"
    assert monictd.check_certificate(cert) == "certified"

    table = monictd.builtin_table()
    assert [n for n, _, _ in table] == [3, 4, 5, 6, 7, 8]
    p4 = table[1][2]
    refuted = json.loads(monictd.verify_attaining(p4, "0," + table[1][1], 4))
    assert refuted["verdict"] == "refuted" and refuted["witness"]["value"] == "6401"
    verdict, b, _ = monictd.certify_table_entry(8)
    assert (verdict, b) == ("certified", "13/100")

    try:
        monictd.bmax_bounds(1)
    except ValueError:
        pass
    else:
        raise AssertionError("bmax_bounds(1) should fail")
    print("smoke test passed")


if __name__ == "__main__":
    main()
