import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from admodel import burnside as B
from admodel import checks, cli, samples, serialize
from admodel.serialize import InputError

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- serialization -----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_object_round_trip(seed):
    rng = random.Random(seed)
    v = samples.dihedral_object(rng, 3, -1, 1, 2)
    text = serialize.dumps(serialize.object_json(v))
    assert serialize.parse_object(serialize.loads(text)) == v


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_burnside_round_trip(seed):
    x = B.random_element(random.Random(seed))
    assert serialize.parse_burnside(json.loads(serialize.dumps(serialize.burnside_json(x)))) == x


def test_burnside_json_shape():
    assert serialize.burnside_json(B.BurnsideElement(1, ["1/2"], 3)) == \
        {"so2": "1", "window": ["1/2"], "limit": "3"}


def test_parse_errors_carry_locations():
    with pytest.raises(InputError, match=r"<input>:2:"):
        serialize.loads('{\n  "stalks": [,]}')
    with pytest.raises(InputError, match=r"object.tail.d.1"):
        serialize.parse_object({"tail": {"dims": {"0": 1, "1": 1}, "d": {"1": [["x"]]}}})
    with pytest.raises(InputError, match=r"object.stalks\[0\]: d_1 d_2"):
        serialize.parse_object({"stalks": [{"dims": {"0": 1, "1": 1, "2": 1},
                                            "d": {"1": [["1"]], "2": [["1"]]}}]})
    with pytest.raises(InputError, match=r"window"):
        serialize.parse_object({"window": 2, "stalks": []})


def test_morphism_and_category_json():
    from admodel import ringoid
    e = ringoid.extract_Ea(1, 1, 1)
    data = serialize.category_json(e)
    assert data["objects"] == ["cQ", "i_1QW"] and data["growth"] == {"cQ->cQ": "K+1 at window K"}
    assert len(data["composition"]) == 8
    f = B.to_endomorphism(B.e(1))
    m = serialize.morphism_json(f)
    assert m["f_k"] == [{"0": [["1"]]}] and m["f_infinity"] == {"0": [["0"]]}


# --- commands ----------------------------------------------------------------

def test_homology_examples(capsys):
    code, out, _ = run(capsys, "homology", "--file", str(INPUTS / "cq.json"), "--json")
    assert code == 0
    assert json.loads(out)["homology"] == {"tail": {"0": 1}, "infinity": {"0": 1}}
    _, out, _ = run(capsys, "homology", "--file", str(INPUTS / "c_disk.json"), "--json")
    assert json.loads(out)["homology"] == {"tail": {}, "infinity": {}}
    _, out, _ = run(capsys, "homology", "--file", str(INPUTS / "stalk2.json"), "--json")
    assert json.loads(out)["homology"]["2"] == {"0": 2}
    code, out, _ = run(capsys, "homology", "--file", str(INPUTS / "stalk2.json"),
                       "--degree-range=-1..1")
    assert code == 0 and "H_-1" in out and "stalk 2" in out


def test_input_errors_exit_2(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, "homology", "--file", str(INPUTS / "bad_sigma.json"))
    assert code == 2 and "sigma" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"stalks": [\n  oops]}')
    code, _, err = run(capsys, "homology", "--file", str(bad))
    assert code == 2 and f"{bad}:2:3" in err
    code, _, err = run(capsys, "homology", "--file", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, err = run(capsys, "burnside", "e_C +")
    assert code == 2 and "expression" in err
    code, _, err = run(capsys, "burnside", "e_Q")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["hom-table", "--degree-range", "3..1"])
    assert exc.value.code == 2


def test_hom_table(capsys):
    code, out, _ = run(capsys, "hom-table", "--imax", "2", "--kmax", "2", "--cutoff", "3",
                       "--json")
    data = json.loads(out)
    assert code == 0 and not data["flagged_nonzero_degrees"]
    names = [o["name"] for o in data["objects"]]
    m = data["matrix"]
    assert m[names.index("i_1QW")][names.index("i_1QW")] == 2
    assert m[names.index("i_1QW")][names.index("i_2QW")] == 0
    assert m[0][0] == 4 and data["growth"]["cQ->cQ"] == "K+1 at window K"
    code, out, _ = run(capsys, "hom-table", "--imax", "1", "--kmax", "1")
    assert "K+1 at window K" in out


def test_ext_table(capsys):
    code, out, _ = run(capsys, "ext-table", "--file", str(INPUTS / "ext_pair.json"), "--json")
    data = json.loads(out)
    assert code == 0 and data["matrix"] == [[0, 1], [0, 0]]
    code, out, _ = run(capsys, "ext-table", "--imax", "1", "--kmax", "2", "--json")
    assert all(v == 0 for row in json.loads(out)["matrix"] for v in row)


def test_burnside_command(capsys):
    code, out, _ = run(capsys, "burnside", "e_D - e_1 - e_2")
    assert code == 0 and "= e_D - e_1 - e_2" in out and "idempotent" in out
    assert out.splitlines()[3].split() == ["O(2)", "...", "D_4", "D_2"]
    _, out, _ = run(capsys, "burnside", "--json", "2*e_C + e_3/3")
    data = json.loads(out)
    assert data["so2"] == "2" and data["window"] == ["0", "0", "1/3"]
    assert data["decomposition"]["e_n"] == {"3": "1/3"}


def test_verify_is_reproducible(capsys):
    runs = [run(capsys, "verify", "burnside", "--seed", "7", "--scale", "0.05") for _ in range(2)]
    assert runs[0] == runs[1] and runs[0][0] == 0
    assert runs[0][1].startswith("seed 7")
    code, out, _ = run(capsys, "verify", "adjunctions", "--seed", "1", "--scale", "0.05",
                       "--json")
    data = json.loads(out)
    assert code == 0 and data["seed"] == 1 and data["ok"]


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    monkeypatch.setitem(checks.RUNNERS, "burnside", lambda seed, scale: checks.SuiteReport(
        "burnside", seed, [checks.run_once("broken", lambda: False)]))
    code, out, _ = run(capsys, "verify", "burnside")
    assert code == 1 and "[FAIL] broken" in out


def test_ringoid_extract(capsys):
    code, out, _ = run(capsys, "ringoid", "extract", "--imax", "2", "--kmax", "2", "--cutoff",
                       "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["valid"] and len(data["objects"]) == 5
    code, out, _ = run(capsys, "ringoid", "extract", "--imax", "1", "--kmax", "2")
    assert code == 0 and "concentrated in degree 0: yes" in out


def test_verify_all_small_scale(capsys):
    code, out, _ = run(capsys, "verify", "all", "--seed", "2", "--scale", "0.02", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert [r["suite"] for r in data["reports"]] == list(checks.SUITES)
