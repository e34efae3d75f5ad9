from __future__ import annotations

import json

from chiforge.cli import main
from chiforge.graph_core import decode_graph6, find_induced_p5

C5 = "Dhc"
C6 = "Ehc_"  # hexagon, contains an induced P5
C5_JOIN_C5 = "Ihf~~vx~G"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_chi_of_c5(capsys):
    code, out, _ = run(capsys, "chi", C5)
    assert code == 0
    assert json.loads(out)["chi"] == 3


def test_p5check_exit_codes(capsys):
    assert run(capsys, "p5check", C5)[0] == 0
    assert run(capsys, "p5check", C6)[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "chi", "not graph6 !!")[0] == 2
    assert run(capsys, "lemma", "no_such_lemma", C5)[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_ledger(capsys):
    code, out, _ = run(capsys, "ledger")
    obj = json.loads(out)
    assert code == 0 and obj["d"] == 1_179_648_036_864_000_096 and obj["violations"] == []


def test_gen_emits_p5_free_graphs(capsys):
    code, out, _ = run(capsys, "gen", "--n", "9", "--count", "3", "--seed", "4")
    lines = out.split()
    assert code == 0 and len(lines) == 3
    assert all(find_induced_p5(decode_graph6(s)) is None for s in lines)


def test_lemma_verify_replay_round_trip(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "lemma", "main_trichotomy", C5_JOIN_C5, "--mode", "relaxed", "--out", str(cert_path))
    assert code == 0
    assert run(capsys, "verify", str(cert_path))[0] == 0
    code, out, _ = run(capsys, "replay", str(cert_path))
    assert code == 0 and json.loads(out)["identical"] is True


def test_lemma_precondition_exit(capsys):
    # strict mode keeps the chi(G) >= 2^d gate, which no desk-size graph meets
    assert run(capsys, "lemma", "main_trichotomy", C5_JOIN_C5, "--mode", "strict")[0] == 1


def test_campaign_csv(capsys):
    code, out, err = run(capsys, "campaign", "gyarfas", "--trials", "5", "--seed", "2")
    assert code == 0
    assert out.splitlines()[0].startswith("instance_id")
    assert len(out.splitlines()) == 6
    assert json.loads(err)["instances"] == 5


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--trials", "5")
    assert code == 0 and out.startswith("graph6,n,omega,chi,exponent")
