import json
import subprocess
import sys

import pytest

from pancakes.cli import main
from pancakes.exact import DistanceTable

WITNESS = "19,14,7,4,10,18,6,4,10,19,14,4,9,11,8,18,8,11,9,4,14,19,10,4,6,18,10,4,7,14"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_verify_witness(capsys):
    assert run(capsys, "verify", "--stack", "-I19", "--flips", WITNESS)[:2] == (0, "sorted: true")
    short = WITNESS.rsplit(",", 1)[0]
    assert run(capsys, "verify", "--stack", "-I19", "--flips", short)[:2] == (0, "sorted: false")


def test_bound(capsys):
    assert run(capsys, "bound", "--stack", "-I15")[:2] == (0, "24")
    code, out, _ = run(capsys, "bound", "--stack", "-I5", "--greedy", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["potential_lb"] == 9 and data["bound"] >= 9


def test_sort_sorted_stack(capsys):
    assert run(capsys, "sort", "--algo", "greedy", "--stack", "I5")[:2] == (0, "trace:\nflips: 0")


def test_sort_outputs(capsys):
    code, out, _ = run(capsys, "sort", "--algo", "burnt-avg", "--stack", "-2 +1 -3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == len(data["flips"])
    code, out, _ = run(capsys, "sort", "--algo", "unburnt-rand", "--stack", "3 1 4 2", "--seed", "5",
                       "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "algo,count,flips"


def test_exact(capsys):
    assert run(capsys, "exact", "--stack", "-I8")[:2] == (0, "15")
    assert run(capsys, "exact", "--stack", "3 1 2", "--format", "csv")[1] == "stack,distance\n3 1 2,2"


def test_bfs_writes_table(capsys, tmp_path):
    path = tmp_path / "b3.panc"
    code, out, _ = run(capsys, "bfs", "--n", "3", "--variant", "burnt", "--out", str(path), "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,variant,distance,count"
    assert DistanceTable.load(path).max_distance == 6
    code, out, _ = run(capsys, "bfs", "--n", "4", "--variant", "unburnt", "--format", "json")
    assert json.loads(out)["max"] == 4


def test_candidates(capsys):
    code, out, _ = run(capsys, "candidates", "--n", "5", "--m", "10", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["by_distance"]["10"] == 4


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--algo", "burnt-avg", "--n", "4", "--exhaustive", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("burnt-avg,4,384,0,6.4609375,")
    code, out, _ = run(capsys, "bench", "--algo", "greedy", "--n", "10", "--samples", "50", "--format", "json")
    assert json.loads(out)["sample_count"] == 50


@pytest.mark.parametrize("argv", [
    ["sort", "--algo", "greedy", "--stack", "I3", "--format", "json"],
    ["bound", "--stack", "J6", "--format", "json"],
    ["exact", "--stack", "Y5", "--format", "json"],
    ["bfs", "--n", "2", "--format", "json"],
    ["candidates", "--n", "4", "--m", "8", "--format", "json"],
    ["bench", "--algo", "unburnt-rand", "--n", "4", "--exhaustive", "--format", "json"],
    ["verify", "--stack", "-1", "--flips", "1", "--format", "json"],
])
def test_json_everywhere(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    json.loads(out)


def test_domain_errors(capsys):
    assert run(capsys, "verify", "--stack", "1 1", "--flips", "1")[0] == 1
    assert run(capsys, "verify", "--stack", "-I3", "--flips", "9")[0] == 1
    assert run(capsys, "bench", "--algo", "greedy", "--n", "9", "--exhaustive")[0] == 1
    assert run(capsys, "sort", "--algo", "greedy", "--stack", "2u 1")[0] == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sort", "--stack", "I3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_resource_limits(capsys, monkeypatch):
    assert run(capsys, "exact", "--stack", "-I10", "--node-limit", "5")[0] == 3
    monkeypatch.setenv("PANCAKE_MEM_LIMIT_MB", "1")
    assert run(capsys, "bfs", "--n", "8")[0] == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pancakes", "verify", "--stack", "-2 -1", "--flips", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "sorted: true"
