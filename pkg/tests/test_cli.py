import json
import subprocess
import sys

import pytest

from conftest import FP1, SEXTIC_NODES

from koszulpole.cli import JobSpec, format_json, main, run


def lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_analyze_text(capsys):
    assert main(["analyze", FP1]) == 0
    out = lines(capsys)
    assert "st: 5" in out and "tau: 5" in out and "ct: 4" in out and "mdr: 2" in out
    assert "milnor: 1,3,6,7,6,5 tail=5 from=5" in out


def test_hp_smooth(capsys):
    assert main(["hp", "--smooth", "2", "4"]) == 0
    assert lines(capsys)[0] == "smooth: 1,3,6,7,6,3,1 tail=0 from=7"


def test_defects_from_file(tmp_path, capsys):
    f = tmp_path / "nodes.txt"
    f.write_text("\n".join(" ".join(map(str, p)) for p in SEXTIC_NODES) + "\n")
    assert main(["defects", "--nodes", str(f)]) == 0
    assert "defect: 5,3,1,0" in lines(capsys)


def test_defects_two_prime_files(tmp_path, capsys):
    paths = []
    for p in (2147483647, 2147483629):
        w = next(pow(a, (p - 1) // 3, p) for a in range(2, 50) if pow(a, (p - 1) // 3, p) != 1)
        path = tmp_path / f"n{p}.txt"
        path.write_text(f"prime: {p}\n0 {p - 1} 1\n0 {-w % p} 1\n0 {-w * w % p} 1\n")
        paths += ["--nodes", str(path)]
    assert main(["defects", *paths, "--json"]) == 0
    recs = [json.loads(l) for l in lines(capsys)]
    assert [r["value"] for r in recs if r["quantity"] == "defect"] == [2, 1, 0]
    assert all(r["certification"] == "modular(2147483629,2147483647)" for r in recs)


def test_json_records_schema(capsys):
    assert main(["spectral", FP1, "--degenerate", "--r", "2", "--json"]) == 0
    recs = [json.loads(l) for l in lines(capsys)]
    assert all(set(r) == {"quantity", "index", "value", "certification"} for r in recs)
    get = {(r["quantity"], r["index"]): r["value"] for r in recs}
    assert get[("d1rank", 0)] == 1
    assert get[("lineL2", 0)] == 2
    assert get[("lineLp2", 0)] == 1
    assert get[("corB1_check", None)] is True


def test_output_is_deterministic():
    job = JobSpec("analyze", poly=FP1)
    assert format_json(run(job).records) == format_json(run(job).records)


def test_exit_codes(tmp_path, capsys):
    assert main(["analyze", "x^2+y^3"]) == 2
    assert main(["analyze", "x^2+(y"]) == 2
    assert main(["analyze", FP1, "--primes", "2147483647"]) == 2
    assert main(["surface", FP1]) == 2
    empty = tmp_path / "none.txt"
    empty.write_text("# no nodes\n")
    assert main(["analyze", "x^2*y^3+z^5", "--nodes", str(empty)]) == 3
    assert main(["spectral", "x^3*z^4+x*y^5*z+x^7+y^7", "--degenerate"]) == 3
    assert main(["analyze", FP1, "--nodes", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()


def test_exact_mode_labels(capsys):
    assert main(["hp", FP1, "--exact"]) == 0
    assert lines(capsys)[-1] == "certification: exact"


def test_syzygy_and_surface(tmp_path, capsys):
    assert main(["syzygy", "(x^3+y^3+z^3)*x", "--factors", "x;x^3+y^3+z^3"]) == 0
    out = lines(capsys)
    assert "syzygy_quotient_dim: 0,0,1" in out
    node = tmp_path / "node.txt"
    node.write_text("0 0 0 1\n")
    assert main(["surface", "(x^2+y^2+z^2)*w^2+x^4+y^4+z^4", "--nvars", "4", "--nodes", str(node)]) == 0
    out = lines(capsys)
    assert "grP2: 19" in out and "grF2: 18" in out and "equalPF: FAIL" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "koszulpole.cli", "hp", "--smooth", "2", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("smooth: 1,3,3,1 tail=0 from=4")
