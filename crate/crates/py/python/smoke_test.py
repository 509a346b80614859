"""Smoke test for the resokit extension. Run after `pip install ./crates/py`."""

import json
import math
import pathlib

import resokit

CONFIGS = pathlib.Path(__file__).resolve().parents[3] / "configs"


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    si = resokit.Material("silicon")
    beam = resokit.Beam(10e-6, 2e-6, 2e-6, "in_plane")
    f1 = beam.frequency(si)
    fem = beam.fem_frequencies(si, 32, 3)
    assert close(fem[0], f1, 1e-4), (fem[0], f1)
    assert fem[0] < fem[1] < fem[2]

    disk = resokit.Disk(3e-6, 0.4e-6)
    assert disk.frequency(si) > 0

    mode = resokit.fundamental_mode(beam, si)
    xdcr = resokit.Transducer(90e-9, 5.0, 10e-6 * 2e-6)
    rx = resokit.motional_resistance(mode, xdcr, 1e4)
    assert rx > 0
    assert resokit.pull_in_voltage(mode, xdcr) > 5.0
    assert resokit.spring_softening_frequency(mode, xdcr) < mode.frequency

    circuit = resokit.equivalent_circuit(mode, xdcr, 1e4)
    assert close(circuit.r_x, rx, 1e-12)
    assert json.loads(circuit.to_json())
    f0 = circuit.f0
    f, mag, ph = circuit.spectrum(f0 * (1 - 6e-4), f0 * (1 + 6e-4), 4001)
    q = resokit.extract_q(f, mag, ph)
    assert close(q, 1e4, 0.01), q

    assert math.isclose(resokit.released_gap(80e-9, 1.19e-6), 130e-9, rel_tol=1e-15)

    assert "oscillator-n2" in resokit.profile_names()
    design = (CONFIGS / "oscillator_beam.json").read_text()
    candidate = resokit.analyze_design(design)
    ok, report = resokit.check_design(candidate, "oscillator-n2")
    assert ok, report
    ok, _ = resokit.check_design(design, "vco")
    assert not ok

    try:
        resokit.Beam(-1.0, 1e-6, 1e-6)
    except resokit.ResokitError:
        pass
    else:
        raise AssertionError("negative length accepted")

    found = resokit.optimize_design("oscillator-n2", (CONFIGS / "beam_space.json").read_text())
    assert found and json.loads(found[0])
    print(f"resokit smoke test ok: f1={f1 / 1e6:.3f} MHz, Rx={rx:.1f} ohm, Q={q:.0f}, {len(found)} candidates")


if __name__ == "__main__":
    main()
