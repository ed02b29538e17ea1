import io
import json
import subprocess
import sys


from topocycles.cli import run
from topocycles.graphs import OrientedEdge, builtin
from topocycles.homology import Chain1
from topocycles.traces import Walk


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip().startswith(("{", "[")) else text)


def test_demo_fig1():
    code, rep = call("demo", "fig1", "--depth", "10")
    assert code == 0
    assert rep["trace_length"] == 22 and rep["reduced_length"] == 0
    assert rep["symbolic"] == {"verdict": "EquivalentUpTo", "depth": 10}


def test_member_violation_exit_code():
    code, rep = call("member", "--family", "double_ladder", "--phi", "stiles-forward")
    assert code == 1
    cut = rep["cuts"]["cut"]
    assert rep["cuts"]["verdict"] == "Violates" and rep["cuts"]["value"] == 1
    assert {e["edge"] for e in cut["edges"]} == {"e-1", "e'-1"}
    code, rep = call("member", "--family", "double_ladder", "--phi", "psi", "--method", "both")
    assert code == 0


def test_snf_identity(tmp_path):
    path = tmp_path / "id.json"
    path.write_text("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]")
    code, rep = call("snf", "--matrix", str(path))
    assert code == 0 and rep["diagonal"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_usage_errors(capsys):
    assert run(["bogus"]) == 2
    assert run(["nst"]) == 2
    assert run(["member", "--family", "ray", "--phi", "psi"]) == 2
    assert run(["reduce", "--word", "+x"]) == 2


def test_family_json_feeds_finite_family(tmp_path):
    code, rep = call("family", "--family", "ladder", "--depth", "2")
    assert code == 0 and rep["edge_count"] == 7
    path = tmp_path / "g.json"
    path.write_text(json.dumps(rep["graph"]))
    code, nst = call("nst", "--family", "finite", "--graph", str(path), "--depth", "9")
    assert code == 0 and nst["normal"] and len(nst["chords"]) == 2


def test_certificate_round_trip(tmp_path):
    g = builtin("double_ladder").ball(4)
    out = [OrientedEdge("e0"), OrientedEdge("f1"), OrientedEdge("e'0", False), OrientedEdge("f0", False)]
    a = Walk.from_steps(g, "v0", out)
    b = Walk.from_steps(g, "v0", [OrientedEdge("e0"), OrientedEdge("e0", False)])
    chain = tmp_path / "chain.json"
    chain.write_text(json.dumps(Chain1.of((1, a), (-1, a), (2, b)).to_json()))
    code, cert = call("certify", "--family", "double_ladder", "--chain", str(chain))
    assert code == 0 and cert["verdict"] == "Boundary"
    cert_path = tmp_path / "cert.json"
    cert_path.write_text(json.dumps(cert))
    code, rep = call("certify", "--family", "double_ladder", "--chain", str(chain), "--verify", str(cert_path))
    assert code == 0 and rep["verified"]
    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps(Chain1.of((1, a)).to_json()))
    code, rep = call("certify", "--family", "double_ladder", "--chain", str(loop))
    assert code == 1 and rep["verdict"] == "NotABoundary"
    code, rep = call("fhom", "--family", "double_ladder", "--chain", str(loop))
    assert code == 0 and rep["function"]["values"] == {"e0": 1, "e'0": -1, "f0": -1, "f1": 1}


def test_word_commands():
    code, rep = call("reduce", "--word", "+1 -1 +1")
    assert code == 0 and rep["reduced"] == "+1"
    code, rep = call("equiv", "--left", "fig1", "--right", "empty", "--depth", "20")
    assert code == 0 and rep["verdict"] == "EquivalentUpTo"
    code, rep = call("equiv", "--left", "rho", "--right", "empty")
    assert code == 1 and rep["n"] == 1
    code, rep = call("permanent", "--word", "+1 -1 +1")
    assert code == 1 and rep["permanent"] == [False, False, False]
    code, rep = call("permanent", "--word", "rho", "--depth", "8")
    assert code == 0
    code, rep = call("ninv", "--word", "rho", "--k", "3")
    assert [r["n"] for r in rep["rows"]] == [1, 1, 1, 1]


def test_trace_euler_rho():
    code, rep = call("trace", "--family", "ladder", "--depth", "4", "--tree", "comb",
                     "--steps", "+e0 +e1 -e1 -e0")
    assert code == 0 and rep["trace"] == "+0 +1 -1 -0" and rep["reduced_length"] == 0
    code, rep = call("euler", "--family", "binary_tree_doubled", "--depth", "3")
    assert code == 0 and rep["net_zero"] and rep["each_tree_edge_once_each_way"]
    code, rep = call("rho", "--family", "double_ladder", "--depth", "6", "--k", "3")
    assert code == 0 and rep["net_zero_on_ball"]


def test_representations_and_cech():
    assert call("validate-rep", "--rep", "psi")[0] == 0
    code, rep = call("validate-rep", "--rep", "cancelling")
    assert code == 1 and rep["verdict"] == "NotLocallyFinite" and rep["vertex"] == 0
    code, rep = call("cech", "--family", "double_ladder", "--n", "3", "--m", "2")
    assert code == 0
    assert [r["chords"] for r in rep["rows"]] == [r["nerve_betti1"] for r in rep["rows"]] == [2, 2, 4, 4]
    code, text = call("cech", "--family", "ladder", "--n", "2", "--table")
    assert "level\tchords\tnerve_betti1\tcontraction_rank\ttorsion" in text


def test_deterministic_output():
    argv = ["demo", "double-ladder", "--depth", "4", "--seed", "3"]
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "topocycles", "demo", "fig1", "--depth", "3", "--table"],
                          capture_output=True, text=True, check=True)
    assert "trace_length\t8" in proc.stdout
