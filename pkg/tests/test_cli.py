import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from sparsedisp.cli import run
from sparsedisp.dispersion import largest_empty_box
from sparsedisp.numerics import parse_rat
from sparsedisp.pointsets import sparse_grid

FLOAT_RE = re.compile(r"\d\.\d|\de[+-]?\d", re.IGNORECASE)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_p32(capsys):
    code, out, _ = call(capsys, "gen", "--k", "3", "--d", "2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "# dim=2 label=P(3,2) n=32"
    assert len(lines[1:]) == 32


def test_gen_by_eps_and_csv(capsys):
    code, out, _ = call(capsys, "gen", "--eps", "1/16", "--d", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x1,x2" and len(lines) == 33


def test_gen_hammersley(capsys):
    code, out, _ = call(capsys, "gen", "--hammersley", "2", "--d", "3")
    assert code == 0 and out.splitlines()[1:] == ["1/4 1/8 1/18", "3/4 1/2 1/3"]


def test_gen_needs_one_order(capsys):
    code, _, err = call(capsys, "gen", "--d", "2")
    assert code == 1 and "--k" in err


def test_card(capsys):
    assert call(capsys, "card", "--k", "3", "--d", "2")[:2] == (0, "32\n")


def test_disp_example(capsys):
    code, out, _ = call(capsys, "disp", "--k", "1", "--d", "2")
    rec = json.loads(out)
    assert code == 0 and rec["volume"] == "1/4"
    assert rec["witness"] == [["0/1", "1/4"], ["0/1", "1/1"]]


def test_disp_threads_and_no_prune_agree(capsys):
    outs = [call(capsys, "disp", "--k", "3", "--d", "2", *extra)[1] for extra in ([], ["--threads", "2"], ["--no-prune"])]
    recs = [json.loads(o) for o in outs]
    assert len({(r["volume"], json.dumps(r["witness"])) for r in recs}) == 1


def test_disp_budget_exit_code(capsys):
    code, out, err = call(capsys, "disp", "--k", "5", "--d", "2", "--budget", "10")
    assert code == 2 and out == ""
    assert "largest empty box found before stopping" in err and "budget" in err


def test_disp_needs_input(capsys):
    assert call(capsys, "disp", "--k", "2")[0] == 1


@pytest.mark.parametrize("k, d", [(k, d) for k in range(5) for d in range(1, 4)])
def test_gen_disp_round_trip(tmp_path, capsys, k, d):
    path = tmp_path / "ps.txt"
    assert call(capsys, "gen", "--k", str(k), "--d", str(d), "--out", str(path))[0] == 0
    code, out, _ = call(capsys, "disp", "--in", str(path))
    assert code == 0
    assert parse_rat(json.loads(out)["volume"]) == largest_empty_box(sparse_grid(k, d)).volume


def test_disp_dimension_mismatch_in_file(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("# dim=2 label=x n=1\n1/2^1\n")
    code, _, err = call(capsys, "disp", "--in", str(path))
    assert code == 1 and err.startswith("error:")


def test_bounds_row(capsys):
    code, out, _ = call(capsys, "bounds", "--eps", "1/4", "--d", "2")
    header, row = out.splitlines()
    cells = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and cells["sparse"] == "4" and cells["hammersley"] == "16"


def test_bounds_decimal_eps_is_exact(capsys):
    assert call(capsys, "bounds", "--eps", "0.25", "--d", "2")[1] == call(capsys, "bounds", "--eps", "1/4", "--d", "2")[1]


@pytest.mark.parametrize("eps", ["1e-2", "0", "1", "-1/4", "x"])
def test_bounds_rejects_bad_eps(capsys, eps):
    code, out, err = call(capsys, "bounds", "--eps", eps, "--d", "2")
    assert code == 1 and out == "" and "error" in err


def test_bounds_range_and_list(capsys):
    code, out, _ = call(capsys, "bounds", "--eps", "1/4,1/8", "--d", "2..4")
    assert code == 0 and len(out.splitlines()) == 1 + 6


def test_bounds_log_base_two_is_labelled(capsys):
    code, out, _ = call(capsys, "bounds", "--eps", "1/4", "--d", "2", "--log-base", "2")
    assert code == 0 and out.startswith("# log base 2")
    assert ",450," in out


def test_bounds_json_has_no_floats(capsys):
    code, out, _ = call(capsys, "bounds", "--eps", "1/4,1/100", "--d", "2,100", "--format", "json")
    assert code == 0
    records = json.loads(out, parse_float=lambda s: pytest.fail(f"float {s} in output"))
    assert len(records) == 4

    def strings(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from strings(v)
        elif isinstance(x, list):
            for v in x:
                yield from strings(v)
        elif isinstance(x, str):
            yield x

    # approximate renderings are labelled as such; exact ones parse as rationals
    for s in strings(records):
        if s.startswith(("0x", "~")) or not s[:1].isdigit():
            continue
        parse_rat(s)


def test_disp_json_has_no_floats(capsys):
    out = call(capsys, "disp", "--k", "2", "--d", "3")[1]
    json.loads(out, parse_float=lambda s: pytest.fail(f"float {s} in output"))
    assert not FLOAT_RE.search(out)


def test_classify_csv_and_json(capsys):
    code, out, _ = call(capsys, "classify", "--d", "2,100", "--eps", "1/4,1/100")
    assert code == 0
    assert out.splitlines() == [
        "d,eps_num,eps_den,region",
        "2,1,4,Black",
        "100,1,4," + out.splitlines()[2].split(",")[-1],
        "2,1,100,LightGray",
        "100,1,100,DarkGray",
    ]
    code, out, _ = call(capsys, "classify", "--d", "2", "--eps", "1/4", "--format", "json")
    assert json.loads(out) == [{"d": 2, "eps": "1/4", "region": "Black"}]


def test_classify_rejects_grid_outside_quarter(capsys):
    assert call(capsys, "classify", "--d", "2", "--eps", "1/3")[0] == 1


def test_figure_formats(tmp_path, capsys):
    ppm = tmp_path / "f.ppm"
    assert call(capsys, "figure", "--d", "2", "--eps", "1/4", "--out", str(ppm))[0] == 0
    assert ppm.read_bytes().endswith(b"1 1\n255\n\x00\x00\x00")
    svg = tmp_path / "f.svg"
    assert call(capsys, "figure", "--d", "2..3", "--eps", "1/4", "--format", "svg", "--out", str(svg))[0] == 0
    assert svg.read_text().count("<rect") == 2


def test_verify_prints_lines(capsys):
    code, out, _ = call(capsys, "verify", "dimension1", "crossover")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert all(line.startswith("[PASS]") for line in lines)


def test_verify_unknown_suite(capsys):
    assert call(capsys, "verify", "nope")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sparsedisp", "disp", "--k", "2", "--d", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["volume"] == str(Fraction(1, 8))
