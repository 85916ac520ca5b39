import json
import subprocess
import sys

import pytest

from coarsehex import cli
from coarsehex.box import BoxShape
from coarsehex.coarse import AbstractCover, Entourage, GroundSet
from coarsehex.dichotomy import Cover


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def columns(tmp_path):
    cov = Cover.from_sets(BoxShape((2, 2)), {"column 0": [(0, 0), (0, 1)], "column 1": [(1, 0), (1, 1)]})
    return write(tmp_path / "cols.json", cov.to_json())


def test_dichotomy_then_verify(tmp_path, columns, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(["dichotomy", "--input", columns, "--output", str(cert)], capsys)
    assert code == 0 and out == ""
    assert json.loads(cert.read_text()) == {
        "kind": "crossing", "member_id": "column 0", "axis": 2, "chain": [[0, 0], [0, 1]]
    }
    code, out, _ = run(["verify", "--input", columns, "--certificate", str(cert)], capsys)
    assert code == 0 and json.loads(out)["ok"] is True


def test_verify_tampered_witness(tmp_path, capsys):
    cov = Cover.from_sets(BoxShape((3,)), {0: [(0,)], 1: [(1,)], 2: [(2,)]})
    cov_path = write(tmp_path / "c.json", cov.to_json())
    cert = {"kind": "witness", "cells": {"shape": {"dims": [3]}, "cells": [[0], [2]]}, "touched_ids": ["0", "2"]}
    code, out, err = run(["verify", "--input", cov_path, "--certificate", write(tmp_path / "w.json", cert)], capsys)
    assert code == 1 and json.loads(out)["reason"] == "diameter" and "diameter" in err


def test_zn_demo_bad_config_is_invalid(tmp_path, capsys):
    job = write(tmp_path / "z.json", {"config": {"n": 2, "m": 3, "N": 7}})
    code, _, err = run(["zn-demo", "--input", job], capsys)
    assert code == 2 and "2m+2" in err


def test_zn_demo_config_only(tmp_path, capsys):
    job = write(tmp_path / "z.json", {"config": {"n": 2, "m": 1, "N": 4}})
    code, out, _ = run(["zn-demo", "--input", job], capsys)
    res = json.loads(out)
    assert code == 0 and res["injective"] and res["valid"] and res["fixed_point_free"]


def test_malformed_json_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"shape": {"dims": [2]},\n "members": [}')
    code, _, err = run(["dichotomy", "--input", str(bad)], capsys)
    assert code == 2 and "bad.json:2:" in err


def test_schema_violation_and_missing_file(tmp_path, capsys):
    path = write(tmp_path / "c.json", {"shape": {"dims": [0]}, "members": {}})
    code, _, err = run(["dichotomy", "--input", path], capsys)
    assert code == 2 and "schema" in err
    code, _, _ = run(["dichotomy", "--input", str(tmp_path / "nope.json")], capsys)
    assert code == 2
    code, _, _ = run(["dichotomy"], capsys)
    assert code == 2
    code, _, _ = run(["no-such-command"], capsys)
    assert code == 2


def test_hex_rejects_too_many_members(tmp_path, capsys):
    cov = Cover.from_sets(BoxShape((3,)), {0: [(0,)], 1: [(1,), (2,)]})
    code, _, _ = run(["hex", "--input", write(tmp_path / "c.json", cov.to_json())], capsys)
    assert code == 2


def test_generate_is_deterministic(tmp_path, capsys):
    args = ["generate", "partition-cover", "--shape", "3,3", "--members", "2", "--seed", "7"]
    _, first, _ = run(args, capsys)
    _, second, _ = run(args, capsys)
    assert first == second
    data = json.loads(first)
    assert data["meta"] == {"generator": "partition-cover", "seed": 7, "members": 2}
    assert sum(len(v) for v in data["members"].values()) == 9

    _, grid, _ = run(["generate", "grid-cover", "--shape", "4,4", "--side", "2"], capsys)
    assert len(json.loads(grid)["members"]) == 4

    rand = ["generate", "random-cover", "--shape", "4,4,4", "--members", "4", "--overlap", "0.2", "--seed", "3"]
    assert run(rand, capsys)[1] == run(rand, capsys)[1]
    assert run(["generate", "grid-cover", "--shape", "4,x"], capsys)[0] == 2
    assert run(["generate", "random-cover", "--shape", "4", "--members", "0"], capsys)[0] == 2


def test_components_command(tmp_path, capsys):
    cells = {"shape": {"dims": [5]}, "cells": [[0], [1], [3]]}
    code, out, _ = run(["components", "--input", write(tmp_path / "s.json", cells)], capsys)
    assert code == 0 and json.loads(out) == {"components": [[[0], [1]], [[3]]]}


def test_multiplicity_commands(tmp_path, columns, capsys):
    code, out, _ = run(["multiplicity", "--input", columns, "--oracle"], capsys)
    res = json.loads(out)
    assert code == 0 and res["count"] == 2 and res["oracle"]["max_multiplicity"] == 2
    g = GroundSet.range(5)
    line = Entourage.from_distance(g, lambda a, b: abs(a - b), 1)
    job = {"entourage": line.to_json(), "cover": AbstractCover(g, {i: {i} for i in range(5)}).to_json()}
    code, out, _ = run(["multiplicity", "--input", write(tmp_path / "m.json", job)], capsys)
    assert code == 0 and json.loads(out) == {"count": 3, "location": 1}


def test_zero_dim_command(tmp_path, capsys):
    g = GroundSet.range(10)
    E = Entourage.from_distance(g, lambda a, b: abs(a - b), 1)
    for r, expected in [(5, 1), (9, 0)]:
        F = Entourage.from_distance(g, lambda a, b: abs(a - b), r)
        job = write(tmp_path / f"z{r}.json", {"entourage": E.to_json(), "bound": F.to_json()})
        code, out, _ = run(["zero-dim", "--input", job], capsys)
        assert code == expected
        assert len(json.loads(out)["cover"]["members"]) == 1


def test_ebox_verify_command(tmp_path, capsys):
    g = GroundSet.range(4)
    ebox = {"shape": {"dims": [4]}, "space": [0, 1, 2, 3], "table": [[[i], i] for i in range(4)]}
    good = Entourage.from_distance(g, lambda a, b: abs(a - b), 1)
    code, _, _ = run(["ebox-verify", "--input", write(tmp_path / "e.json", {"ebox": ebox, "entourage": good.to_json()})], capsys)
    assert code == 0
    job = {"ebox": ebox, "entourage": Entourage.diagonal(g).to_json()}
    code, out, _ = run(["ebox-verify", "--input", write(tmp_path / "d.json", job)], capsys)
    assert code == 1 and json.loads(out)["detail"]["cells"] == [[0], [1]]


def product_job(k=5):
    g = GroundSet.range(k)
    line = Entourage.from_distance(g, lambda a, b: abs(a - b), 1)
    bound = Entourage.from_distance(g, lambda a, b: abs(a - b), 2)
    chain = {"space": g.to_json(), "points": list(range(k)), "scale": line.to_json()}
    ground = [[a, b] for a in range(k) for b in range(k)]
    halves = {"left": [p for p in ground if p[0] < 2], "right": [p for p in ground if p[0] >= 2]}
    return {"chains": [chain, chain], "cover": {"ground": ground, "members": halves}, "bounds": [bound.to_json()] * 2}


def test_product_demo_and_verify_verdict(tmp_path, capsys):
    verdict = tmp_path / "v.json"
    code, _, _ = run(["product-demo", "--input", write(tmp_path / "p.json", product_job()), "--output", str(verdict)], capsys)
    res = json.loads(verdict.read_text())
    assert code == 0 and res["branch"] == "contradiction" and res["axis"] == 2
    code, out, _ = run(["verify", "--certificate", str(verdict)], capsys)
    assert code == 0


def test_zn_demo_with_cover(tmp_path, capsys):
    import itertools

    ground = [list(p) for p in itertools.product(range(4), repeat=2)]
    job = {
        "config": {"n": 2, "m": 1, "N": 4},
        "cover": {"ground": ground, "members": {str(i): [p] for i, p in enumerate(ground)}},
        "bound": {"kind": "pairs", "ground": ground, "pairs": []},
    }
    verdict = tmp_path / "v.json"
    code, _, _ = run(["zn-demo", "--input", write(tmp_path / "z.json", job), "--output", str(verdict), "--pretty"], capsys)
    assert code == 0 and json.loads(verdict.read_text())["branch"] == "multiplicity"
    assert run(["verify", "--certificate", str(verdict)], capsys)[0] == 0


def test_internal_contradiction_exit_code(tmp_path, columns, capsys, monkeypatch):
    from coarsehex.errors import InternalContradiction

    def boom(cov):
        raise InternalContradiction("forced")

    monkeypatch.setattr(cli.dichotomy, "dichotomy", boom)
    code, _, err = run(["dichotomy", "--input", columns], capsys)
    assert code == 3 and "INTERNAL CONTRADICTION" in err


def test_console_entry_point(tmp_path, columns):
    proc = subprocess.run(
        [sys.executable, "-m", "coarsehex.cli", "dichotomy", "--input", columns],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["kind"] == "crossing"
