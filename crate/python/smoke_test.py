"""Smoke test for the hkrr extension module. Run after `maturin develop` or
installing the wheel built from crates/py."""

import hkrr


def main():
    cert = hkrr.cn(3)
    assert cert["value"] == "4320", cert
    assert [p for p, _ in cert["factorization"]] == [2, 3, 5]

    q2 = hkrr.qk_poly(2)
    assert q2.coeffs() == ["3", "4", "1"], q2
    roots = hkrr.qk_roots(2)
    assert len(roots) == 2 and all(r < 0 for r in roots)

    split3 = hkrr.known_family("split", 3)
    assert split3 == hkrr.Poly(["4", "13/6", "3/8", "1/48"])
    prof = hkrr.profile(3, split3)
    assert prof["c_x"] == "15" and prof["n_x"] == "6", prof

    k3 = hkrr.q_rr_from_chern(2, [([1, 1], "828"), ([2], "15")])
    assert k3.symmetry_shift() == "4", k3
    assert hkrr.decompose_qk(k3) == ["25/32", "21/32"]

    case = hkrr.solve_case(3, 1)
    assert case["n_x"] == ["2", "6"], case["n_x"]

    try:
        hkrr.Poly(["1/0"])
    except ValueError:
        pass
    else:
        raise AssertionError("zero denominator accepted")

    print("hkrr smoke test ok")


if __name__ == "__main__":
    main()
