import json
from pathlib import Path

import pytest

from hmst3.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def keys(tmp_path, capsys):
    params = tmp_path / "p.json"
    assert run(["params", "--p", 3, "--n", 1, "--out", params], capsys)[0] == 0
    paths = {}
    for scheme in ("improved", "legacy"):
        pub, priv = tmp_path / f"{scheme}.pub", tmp_path / f"{scheme}.priv"
        argv = ["keygen", "--scheme", scheme, "--params", params, "--seed", 42, "--out-pub", pub, "--out-priv", priv]
        assert run(argv, capsys)[0] == 0
        paths[scheme] = (pub, priv)
    return tmp_path, paths


def test_keygen_is_deterministic(keys, capsys):
    tmp, paths = keys
    pub, priv = tmp / "again.pub", tmp / "again.priv"
    argv = ["keygen", "--scheme", "improved", "--params", tmp / "p.json", "--seed", 42,
            "--out-pub", pub, "--out-priv", priv]
    run(argv, capsys)
    assert pub.read_bytes() == paths["improved"][0].read_bytes()
    assert priv.read_bytes() == paths["improved"][1].read_bytes()


def test_golden_keys_match_cli(keys):
    golden = Path(__file__).parent / "golden"
    _, paths = keys
    assert paths["improved"][0].read_bytes() == (golden / "improved_pub.json").read_bytes()
    assert paths["legacy"][1].read_bytes() == (golden / "legacy_priv.json").read_bytes()


@pytest.mark.parametrize("scheme", ["improved", "legacy"])
def test_int_roundtrip(scheme, keys, capsys):
    tmp, paths = keys
    pub, priv = paths[scheme]
    ct = tmp / "c.json"
    assert run(["encrypt", "--pub", pub, "--msg", 123, "--seed", 1, "--out", ct], capsys)[0] == 0
    code, out, _ = run(["decrypt", "--priv", priv, "--pub", pub, "--in", ct], capsys)
    assert code == 0 and out.strip() == "123"


def test_file_roundtrip(keys, capsys):
    tmp, paths = keys
    pub, priv = paths["improved"]
    msg, ct, back = tmp / "m.bin", tmp / "c.json", tmp / "back.bin"
    msg.write_bytes(bytes(range(256)) * 2)
    assert run(["encrypt", "--pub", pub, "--msg-file", msg, "--seed", 3, "--out", ct], capsys)[0] == 0
    assert run(["decrypt", "--priv", priv, "--pub", pub, "--in", ct, "--out", back], capsys)[0] == 0
    assert back.read_bytes() == msg.read_bytes()


def test_encrypt_determinism_and_entropy(keys, capsys):
    tmp, paths = keys
    pub = paths["legacy"][0]
    a, b = tmp / "a.json", tmp / "b.json"
    run(["encrypt", "--pub", pub, "--msg", 5, "--seed", 9, "--out", a], capsys)
    run(["encrypt", "--pub", pub, "--msg", 5, "--seed", 9, "--out", b], capsys)
    assert a.read_bytes() == b.read_bytes()
    code, _, err = run(["encrypt", "--pub", pub, "--msg", 5, "--out", b], capsys)
    assert code == 0 and err.startswith("seed: ")


def test_attack_sequential(keys, capsys):
    tmp, paths = keys
    pub = paths["legacy"][0]
    ct = tmp / "c.json"
    run(["encrypt", "--pub", pub, "--msg", 77, "--q1", 8, "--q2", 2, "--seed", 1, "--out", ct], capsys)
    code, out, _ = run(["attack", "--mode", "sequential", "--pub", pub, "--in", ct], capsys)
    assert code == 0
    rep = json.loads(out)["payload"]
    assert rep["found_Q"] == [8, 2] and rep["trials"] <= 12
    assert list(rep)[:6] == ["scheme", "target", "q", "trials", "found_Q", "x"]


def test_attack_kpa_and_exhaustion(keys, capsys):
    tmp, paths = keys
    pub = paths["improved"][0]
    ct = tmp / "c.json"
    run(["encrypt", "--pub", pub, "--msg", 40, "--q1", 3, "--q2", 1, "--seed", 1, "--out", ct], capsys)
    code, out, _ = run(["attack", "--mode", "kpa", "--pub", pub, "--in", ct, "--plain", 40], capsys)
    assert code == 0 and json.loads(out)["payload"]["found_Q"] == [3, 1]
    code, out, err = run(["attack", "--mode", "kpa", "--pub", pub, "--in", ct, "--plain", 41], capsys)
    assert code == 4 and json.loads(out)["payload"]["trials"] == 27
    for mode in ("joint-y2", "joint-y3"):
        assert run(["attack", "--mode", mode, "--pub", pub, "--in", ct], capsys)[0] == 0


def test_attack_detect(keys, capsys):
    _, paths = keys
    _, out, _ = run(["attack", "--mode", "detect", "--pub", paths["legacy"][0]], capsys)
    assert "verdict=vulnerable" in out
    _, out, _ = run(["attack", "--mode", "detect", "--pub", paths["improved"][0]], capsys)
    assert "verdict=not-vulnerable" in out


def test_usage_errors(keys, capsys):
    tmp, paths = keys
    pub = paths["improved"][0]
    with pytest.raises(SystemExit) as exc:
        main(["encrypt", "--pub", str(pub)])
    assert exc.value.code == 2
    assert run(["encrypt", "--pub", pub, "--msg", 10**6, "--out", tmp / "x"], capsys)[0] == 2
    assert run(["encrypt", "--pub", pub, "--msg", 1, "--q1", 1, "--out", tmp / "x"], capsys)[0] == 2
    assert run(["encrypt", "--pub", pub, "--msg", 1, "--q1", 9, "--q2", 0, "--out", tmp / "x"], capsys)[0] == 2
    assert run(["encrypt", "--pub", tmp / "missing", "--msg", 1, "--out", tmp / "x"], capsys)[0] == 2
    assert run(["attack", "--mode", "kpa", "--pub", pub], capsys)[0] == 2
    assert run(["attack", "--mode", "sequential", "--pub", pub, "--in", pub], capsys)[0] == 2
    assert run(["bench", "--q", 12, "--reps", 1], capsys)[0] == 2


def test_integrity_errors(keys, capsys):
    tmp, paths = keys
    ct = tmp / "c.json"
    run(["encrypt", "--pub", paths["improved"][0], "--msg", 1, "--seed", 1, "--out", ct], capsys)
    code, _, _ = run(["decrypt", "--priv", paths["legacy"][1], "--pub", paths["improved"][0], "--in", ct], capsys)
    assert code == 3
    doc = json.loads(ct.read_text())
    doc["version"] = "hmst3/0"
    ct.write_text(json.dumps(doc))
    assert run(["decrypt", "--priv", paths["improved"][1], "--pub", paths["improved"][0], "--in", ct], capsys)[0] == 3


def test_wrong_key_is_detected(keys, capsys):
    tmp, paths = keys
    other_pub, other_priv = tmp / "o.pub", tmp / "o.priv"
    run(["keygen", "--scheme", "improved", "--params", tmp / "p.json", "--seed", 7,
         "--out-pub", other_pub, "--out-priv", other_priv], capsys)
    ct = tmp / "c.json"
    fails = 0
    for m in range(20):
        run(["encrypt", "--pub", paths["improved"][0], "--msg", m, "--seed", m, "--out", ct], capsys)
        code, out, _ = run(["decrypt", "--priv", other_priv, "--pub", paths["improved"][0], "--in", ct], capsys)
        fails += code == 3 or out.strip() != str(m)
    assert fails > 0


def test_selftest(capsys):
    code, out, _ = run(["selftest", "--q", 3], capsys)
    assert code == 0 and "FAIL" not in out and out.count("PASS") >= 6


def test_bench(capsys):
    code, out, _ = run(["bench", "--q", 9, "--reps", 2], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "op,q,reps,total_ms,per_op_us"
    ops = [line.split(",")[0] for line in lines[1:]]
    assert {"improved.keygen", "improved.encrypt", "improved.decrypt"} <= set(ops)
    assert all(line.split(",")[1:3] == ["9", "2"] for line in lines[1:])
