import io
import json
import subprocess
import sys


from bellscope.cli import run


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def gen(*args):
    code, text = call(["gen", *args])
    assert code == 0
    return text


def test_pr_pipeline(monkeypatch):
    code, text = call(["eval", "--family", "chsh", "--variant", "0"], gen("pr", "--variant", "0"), monkeypatch)
    obj = json.loads(text)
    assert code == 1 and obj["value"] == "4/1" and obj["satisfied"] is False


def test_uniform_check(monkeypatch):
    code, text = call(["check"], gen("uniform"), monkeypatch)
    obj = json.loads(text)
    assert code == 0 and obj["no_signaling"] is True and obj["signaling_gap"] == "0/1"


def test_signaling_check(monkeypatch):
    code, text = call(["check"], gen("signaling-6"), monkeypatch)
    assert code == 1 and json.loads(text)["signaling_gap"] == "1/1"


def test_malformed_json(monkeypatch, capsys):
    code, _ = call(["check"], '{"p": [1, 2', monkeypatch)
    assert code == 2
    assert "line 1 column" in capsys.readouterr().err


def test_bad_shape(monkeypatch):
    code, _ = call(["project"], '{"p": [[1]]}', monkeypatch)
    assert code == 2


def test_unknown_flag():
    assert run(["gen", "pr", "--nope"], io.StringIO()) == 2
    assert run(["eval", "--family", "bogus"], io.StringIO()) == 2


def test_bad_bits_and_variant():
    assert run(["gen", "local", "--bits", "01x0"], io.StringIO()) == 2
    assert run(["gen", "pr", "--variant", "9"], io.StringIO()) == 2


def test_every_gen_feeds_every_consumer(monkeypatch):
    outputs = [
        gen("pr", "--variant", "3"), gen("local", "--bits", "+-+-"), gen("uniform"),
        gen("signaling-4"), gen("signaling-6"), gen("random", "--kind", "ns", "--seed", "4"),
        gen("random", "--kind", "general", "--seed", "4"),
        gen("singlet", "--angles", "0", "90", "135", "45", "--degrees"),
        gen("singlet", "--angles", "0", "90", "135", "45", "--degrees", "--max-denominator", "1000000"),
    ]
    consumers = [["check"], ["project"], ["eval", "--family", "ns6"], ["member", "--polytope", "ns"],
                 ["member", "--polytope", "local"]]
    for text in outputs:
        approx = json.loads(text)["mode"] == "approx"
        for argv in consumers:
            code, out = call(argv, text, monkeypatch)
            if approx and argv[-1] == "local":
                assert code == 2
            else:
                assert code in (0, 1)
                json.loads(out)


def test_quantum_member(monkeypatch):
    text = gen("singlet", "--angles", "0", "90", "135", "45", "--degrees", "--max-denominator", "1000000")
    code, out = call(["member", "--polytope", "local"], text, monkeypatch)
    assert code == 1 and json.loads(out)["member"] is False
    code, out = call(["member", "--polytope", "ns"], text, monkeypatch)
    assert code == 0 and json.loads(out)["hull_member"] is True


def test_local_member_weights(monkeypatch):
    code, out = call(["member", "--polytope", "local"], gen("uniform"), monkeypatch)
    obj = json.loads(out)
    assert code == 0 and obj["member"]
    from fractions import Fraction

    assert sum(Fraction(w["weight"]) for w in obj["weights"]) == 1


def test_maximize_and_facet_rank():
    out = io.StringIO()
    assert run(["maximize", "--family", "ns4", "--polytope", "ns", "--cross-check"], out) == 0
    assert {r["max"] for r in json.loads(out.getvalue())} == {"2/1"}
    out = io.StringIO()
    assert run(["maximize", "--family", "chsh", "--variant", "6", "--polytope", "general"], out) == 1
    out = io.StringIO()
    assert run(["facet-rank", "--family", "chsh", "--variant", "6", "--polytope", "local"], out) == 0
    r = json.loads(out.getvalue())
    assert r["affine_rank"] == 8 and r["is_facet"]


def test_catalog_dump():
    out = io.StringIO()
    assert run(["catalog"], out) == 0
    assert len(json.loads(out.getvalue())) == 8 + 8 + 2 + 16 + 16 + 32 + 14


def test_singlet_seed_and_determinism():
    assert gen("random", "--seed", "5") == gen("random", "--seed", "5")
    assert gen("random", "--seed", "5") != gen("random", "--seed", "6")


def test_tolerance_flag(monkeypatch):
    text = gen("singlet", "--angles", "0", "1", "2", "3")
    code, _ = call(["--tolerance", "abc", "check"], text, monkeypatch)
    assert code == 2
    code, out = call(["--tolerance", "1/1000", "check"], text, monkeypatch)
    assert code == 0


def test_verify_all_subprocess():
    cmd = [sys.executable, "-m", "bellscope", "verify", "all"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    certs = json.loads(a.stdout)
    assert len(certs) == 5 and all(c["verdict"] == "confirmed" for c in certs)


def test_shell_pipeline():
    p = subprocess.run(
        f"{sys.executable} -m bellscope gen pr --variant 0 | "
        f"{sys.executable} -m bellscope eval --family chsh --variant 0",
        shell=True, capture_output=True, text=True)
    assert p.returncode == 1 and json.loads(p.stdout)["value"] == "4/1"
