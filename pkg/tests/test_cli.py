import json
import subprocess
import sys

import pytest

from rotokernel.cli import canon, main, parse_angle

from conftest import FIXTURES


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(text):
    return json.loads(text.strip().splitlines()[-1])


def fx(name):
    return FIXTURES / f"{name}.json"


def test_parse_angle():
    assert parse_angle("0.5") == 0.5
    assert parse_angle("pi/8") == pytest.approx(0.39269908169872414)
    assert parse_angle("-3pi/4") == pytest.approx(-2.356194490192345)
    with pytest.raises(Exception):
        parse_angle("north")


def test_canon_snaps_noise():
    assert canon({"a": [1e-15, 2.0000000000001]}) == {"a": [0.0, 2.0]}


def test_kernel_square_double(capsys):
    code, out, _ = run(capsys, "kernel", fx("square"), "--theta", "0.3", "--set", "double")
    r = report(out)
    assert code == 0 and r["result"]["area"] == 1.0
    assert set(r) == {"command", "input_sha256", "result", "wall_time_s"}


def test_kernel_nt(capsys):
    code, out, _ = run(capsys, "kernel", fx("nt"), "--theta", "0")
    assert code == 0 and report(out)["result"]["area"] == pytest.approx(8 / 3, abs=1e-11)


def test_kernel_empty_exit_code(capsys):
    code, out, _ = run(capsys, "kernel", fx("dn"), "--theta", "0", "--set", "single")
    assert code == 3 and report(out)["result"]["area"] == 0.0


def test_intervals(capsys):
    code, out, _ = run(capsys, "intervals", fx("dn"))
    iv = report(out)["result"]["intervals"]
    assert code == 0 and len(iv) == 2
    assert iv[0]["interval"][0] == iv[0]["interval"][1] and iv[0]["closed"] == [True, True]
    assert iv[1]["interval"][0] == pytest.approx(1.10714871779, abs=1e-9) and iv[1]["closed"] == [True, False]


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", fx("lp"))
    r = report(out)["result"]
    assert code == 0 and r["value"] == 3.0 and r["theta_star"] == 0.0
    code, out, _ = run(capsys, "optimize", fx("square"), "--objective", "perimeter")
    assert report(out)["result"]["value"] == 4.0
    code, out, _ = run(capsys, "optimize", fx("dn"))
    assert code == 3 and report(out)["result"]["emptyForAllTheta"] is True


def test_deterministic_output(capsys):
    a = report(run(capsys, "optimize", fx("plus"))[1])
    b = report(run(capsys, "optimize", fx("plus"))[1])
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b


def test_cw_input_warns(capsys):
    code, out, err = run(capsys, "kernel", fx("square_cw"), "--theta", "0.2")
    assert code == 0 and "warning" in err.lower()
    assert report(out)["result"]["area"] == 1.0


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bow.json"
    bad.write_text(json.dumps({"vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]}))
    assert run(capsys, "kernel", bad)[0] == 2
    assert run(capsys, "kernel", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "optimize", fx("nt"))[0] == 2
    assert run(capsys, "kernel", fx("square"), "--set", "triple")[0] == 2


def test_scan_csv(capsys, tmp_path):
    code, out, err = run(capsys, "oracle", "scan", fx("lp"), "--samples", "10000")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 10_001
    assert lines[0] == "theta,empty,area,perimeter"
    assert report(err)["result"]["samples"] == 10_000
    dest = tmp_path / "scan.csv"
    run(capsys, "oracle", "scan", fx("square"), "--samples", "100", "--out", dest)
    rows = dest.read_text().strip().splitlines()[1:]
    assert all(r.split(",")[2] == "1" for r in rows)


def test_generate_roundtrip(capsys, tmp_path):
    dest = tmp_path / "q.json"
    assert run(capsys, "oracle", "generate", "--kind", "family_Q", "--n", "24", "--seed", "3", "--out", dest)[0] == 0
    code, out, _ = run(capsys, "optimize", dest)
    assert code in (0, 3)


def test_render_writes_svg(capsys, tmp_path):
    dest = tmp_path / "k.svg"
    assert run(capsys, "render", fx("lp"), "--theta", "pi/4", "--set", "double", "--out", dest)[0] == 0
    svg = dest.read_text()
    assert svg.startswith("<?xml") and 'class="kernel"' in svg and 'class="clip"' in svg


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "rotokernel", "kernel", str(fx("square"))], capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["result"]["area"] == 1.0
