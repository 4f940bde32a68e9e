import json

import pytest

from faultytree.harness import (EXEMPT, MATCH, VIOLATION, GenParams, RunConfig, TraceError, format_trace,
                                generate, parse_trace, run_trace)
from faultytree.harness.cli import main
from faultytree.harness.trace import count_ops


def test_parse_errors_carry_line_numbers():
    with pytest.raises(TraceError, match="line 2"):
        parse_trace("ADDLEAF 0 1\nLA 5 1\n")
    with pytest.raises(TraceError, match="line 1"):
        parse_trace("FROB 1\n")
    with pytest.raises(TraceError, match="line 3"):
        parse_trace("ADDLEAF 0\n# note\nCORRUPT 1 FIELD colour=3\n")
    with pytest.raises(TraceError, match="END"):
        parse_trace("BUILD_STATIC 3\n-1 0 1\n")
    with pytest.raises(TraceError):
        parse_trace("ADDLEAF 0\nBUILD_STATIC 2\n-1\nEND\n")


def test_trivial_trace():
    rep = run_trace(parse_trace("ADDLEAF 0 1\nLA 1 1\n"), RunConfig(delta=1))
    assert rep.outputs == ["1", "0"]
    assert rep.verdicts == {MATCH: 1, EXEMPT: 0, VIOLATION: 0}


def test_chain_generator():
    t = generate("chain", GenParams(n=10, query_density=0))
    assert [d.args[0] for d in t.directives] == list(range(9))


def test_generation_is_deterministic():
    p = GenParams(n=300, corruptions=3, weights=(1, 9))
    for kind in ("chain", "caterpillar", "random_attach", "star_of_paths", "worked_example"):
        assert format_trace(generate(kind, p, 5)) == format_trace(generate(kind, p, 5))
    assert format_trace(generate("random_attach", p, 5)) != format_trace(generate("random_attach", p, 6))


def test_format_parse_round_trip():
    p = GenParams(n=200, corruptions=6, weights=(1, 9))
    for kind in ("random_attach", "worked_example"):
        t = generate(kind, p, 2)
        again = parse_trace(format_trace(t))
        assert [(d.op, d.args) for d in again.directives] == [(d.op, d.args) for d in t.directives]
        assert again.meta == t.meta


def test_replay_is_deterministic():
    t = generate("random_attach", GenParams(n=200, weights=(1, 9)), 4)
    cfg = RunConfig(delta=3, seed=9, adversary="adaptive-path")
    assert run_trace(t, cfg).to_json() == run_trace(t, cfg).to_json()


@pytest.mark.parametrize("n,blacks", [(64, 15), (65, 16)])
def test_clean_chain_black_trajectory(n, blacks):
    rep = run_trace(generate("chain", GenParams(n=n, delta=4, query_density=0)), RunConfig(delta=4))
    assert rep.black_trajectory[-1] == blacks
    assert rep.black_trajectory == sorted(rep.black_trajectory)


def test_worked_example_trace():
    rep = run_trace(generate("worked_example"), RunConfig(delta=3))
    assert rep.outputs[-1] == "1" and rep.verdicts[MATCH] == 1


def test_scripted_leaf_fault_is_never_a_violation():
    text = "ADDLEAF 0\n" + "".join(f"ADDLEAF {v}\n" for v in range(1, 30))
    text += "CORRUPT 30 FIELD p=3\n" + "".join(f"LA 30 {k}\n" for k in range(32))
    rep = run_trace(parse_trace(text), RunConfig(delta=2))
    assert rep.verdicts[VIOLATION] == 0 and rep.verdicts[EXEMPT] > 0


def test_zero_budget_random_equals_no_adversary():
    t = generate("random_attach", GenParams(n=300, weights=(1, 9)), 1)
    a = run_trace(t, RunConfig(delta=3, adversary="random", budget=0, rate=0.5))
    b = run_trace(t, RunConfig(delta=3))
    assert a.outputs == b.outputs and a.corruption_log == [] and a.ops == b.ops


def test_irregular_pattern_still_answers_clean_queries():
    # held-back flags desynchronise the coloring on paths the adversary never touches
    irregular = 0
    for seed in range(40):
        t = generate("chain", GenParams(n=150, delta=3, query_density=1.0, final_queries=40), seed)
        rep = run_trace(t, RunConfig(delta=3, seed=seed, adversary="targeted-flags", budget=12, rate=0.5))
        assert rep.verdicts[VIOLATION] == 0
        irregular += rep.exceptional_events > 0 or rep.black_trajectory[-1] != 150 // 3
    assert irregular > 0


def test_count_ops():
    assert count_ops(parse_trace("ADDLEAF 0\nLA 1 0\nLCA 0 1\nCHECKPOINT\n")) == (1, 2)


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.trace"
    bad.write_text("ADDLEAF 0\nLA 5 1\n")
    assert main(["--trace", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    report = tmp_path / "r.json"
    assert main(["--generate", "chain", "--n", "64", "--delta", "4", "--check-oracle", "--quiet",
                 "--report", str(report)]) == 0
    assert json.loads(report.read_text())["verdicts"]["VIOLATION"] == 0
    assert main(["--generate", "worked_example", "--check-oracle", "--quiet"]) == 0
    assert main(["--generate", "random_attach", "--n", "300", "--delta", "8", "--adversary", "adaptive-path",
                 "--check-oracle", "--audit-forest", "--quiet"]) == 0
    assert main(["--generate", "chain", "--n", "200", "--delta", "4", "--safe-words", "8", "--quiet"]) == 1
    assert main(["--generate", "chain", "--delta", "0", "--quiet"]) == 2


def test_checkpoint_output():
    rep = run_trace(parse_trace("ADDLEAF 0\nADDLEAF 1\nCHECKPOINT\n"), RunConfig(delta=2))
    assert rep.outputs[-1].startswith("CHECKPOINT blacks=1 q_nodes=1")
