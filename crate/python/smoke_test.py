"""Smoke test for the pyqactivation extension module."""

import math

import pyqactivation as qa


def main():
    for q in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        chi = qa.chi_q(q)
        setting = qa.WaveplateSetting(math.pi / 4, 0.0)
        rho = qa.premeasurement(chi, setting)
        assert abs(qa.discord_bell_diagonal(chi) - q) < 1e-10
        assert abs(qa.witness_expect("W2", chi) - (0.5 - q)) < 1e-9
        assert abs(qa.witness_expect("W3", rho) - (0.5 - q)) < 1e-9
        print(f"q={q:.1f}  D={qa.discord_bell_diagonal(chi):.4f}  N(pi/4,0)={qa.negativity(rho):.4f}")

    scan = qa.sphere_scan(1.0, math.pi / 90)
    print(f"q=1 scan: min_low={scan['min_low']:+.4f} certified={scan['certified']}")

    rho = qa.premeasurement(qa.chi_q(0.2), qa.WaveplateSetting(math.pi / 12, math.pi / 6))
    estimate = qa.tomography(rho, 1e4, 7)
    fid = qa.fidelity(rho, estimate)
    assert fid > 0.98
    print(f"tomography fidelity at 1e4 events: {fid:.4f}")

    try:
        qa.chi_q(-0.1)
    except ValueError as e:
        print(f"rejected q=-0.1: {e}")
    else:
        raise AssertionError("expected ValueError")
    print("ok")


if __name__ == "__main__":
    main()
