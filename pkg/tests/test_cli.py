import io
import json
import subprocess
import sys

import pytest

from pwv.cli import main, parse_vector, run_analyze
from pwv.report import emit_report


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def analyze(path, *args, **kw):
    out = io.BytesIO()
    code = run_analyze(path, *args, out=out, **kw)
    return code, out.getvalue()


def test_validate_shipped(k3_file):
    assert main(["validate", k3_file]) == 0


def test_validate_truncated(tmp_path, k3_file):
    p = tmp_path / "t.json"
    p.write_bytes(open(k3_file, "rb").read()[:500])
    assert main(["validate", str(p)]) == 1


def test_validate_missing(tmp_path):
    assert main(["validate", str(tmp_path / "nope.json")]) == 1


def test_validate_asymmetric(tmp_path, k3_doc, capsys):
    doc = json.loads(json.dumps(k3_doc))
    doc["cup"][0][4] = "3"
    assert main(["validate", write(tmp_path, "a.json", doc)]) == 2
    assert "graded commutativity" in capsys.readouterr().err


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(bbf_gram=d["bbf_gram"][:-1]),
    lambda d: d.update(eta=d["eta"][:3]),
    lambda d: d.update(hodge_diamond=[[1, 0, 1], [0, 19, 0], [1, 0, 1]]),
    lambda d: d.update(flags={"colour": True}),
    lambda d: d["bbf_gram"][0].__setitem__(0, 2),
])
def test_validate_document_errors(tmp_path, k3_doc, mutate):
    doc = json.loads(json.dumps(k3_doc))
    mutate(doc)
    assert main(["validate", write(tmp_path, "b.json", doc)]) == 2


def test_analyze_exit_codes(tmp_path, k3_doc):
    doc = json.loads(json.dumps(k3_doc))
    doc["beta"] = [1, 1] + [0] * 20
    code, out = analyze(write(tmp_path, "c.json", doc), skip_llv=True)
    assert code == 3 and out == b""
    doc = json.loads(json.dumps(k3_doc))
    doc["rho"] = [0, 0, 1] + [0] * 19   # isotropic
    assert analyze(write(tmp_path, "d.json", doc), skip_llv=True)[0] == 3


def test_analyze_wrong_signature(tmp_path, k3_doc):
    # flip the sign of the first E8(-1) block: not a valid BBF signature,
    # but still a valid ring for n = 1 once the cup table matches
    from pwv.algebra import build_k3
    from pwv.linalg import Matrix
    gram = [row[:] for row in k3_doc["bbf_gram"]]
    for i in range(6, 14):
        for j in range(6, 14):
            gram[i][j] = -gram[i][j]
    doc = json.loads(json.dumps(k3_doc))
    doc["bbf_gram"] = gram
    doc["cup"] = build_k3(Matrix(gram)).sparse_products()
    assert analyze(write(tmp_path, "e.json", doc), skip_llv=True)[0] == 3


def test_analyze_deterministic(k3_file):
    c1, a = analyze(k3_file, skip_llv=True)
    c2, b = analyze(k3_file, skip_llv=True)
    assert c1 == c2 == 0 and a == b
    report = json.loads(a)
    assert report["all_verdicts_true"]
    assert "timing_seconds" not in report
    assert report["gr_perverse"]["2"] == [1, 20, 1]


def test_canonical_json():
    r = {"b": "1/2", "a": [1, "0+1*i"]}
    assert emit_report(r, "json") == b'{"a":[1,"0+1*i"],"b":"1/2"}\n'
    assert emit_report(r, "json") == emit_report(dict(reversed(list(r.items()))), "json")


def test_text_report(k3_file):
    code, text = analyze(k3_file, fmt="text", skip_llv=True)
    assert code == 0
    assert "H^2 : 1 20 1" in text.decode()


def test_seed_rho_and_swap(k3_file):
    rho = "0,0,0,0,1,1" + ",0" * 16
    code, out = analyze(k3_file, seed_rho=rho, skip_llv=True)
    r = json.loads(out)
    assert code == 0 and r["classes"]["rho"][4:6] == ["1", "1"]
    assert r["input"]["options"]["seed_rho"][4] == "1"
    code, out = analyze(k3_file, swap_eta_beta=True, skip_llv=True)
    r = json.loads(out)
    assert code == 0 and r["all_verdicts_true"]
    assert r["classes"]["eta"][0] == "1" and r["classes"]["beta"][1] == "1"


def test_seed_rho_not_orthogonal(k3_file):
    assert analyze(k3_file, seed_rho="[1" + ",0" * 21 + "]", skip_llv=True)[0] == 3


def test_parse_vector():
    assert [str(x) for x in parse_vector("1/2, -3")] == ["1/2", "-3"]
    assert [str(x) for x in parse_vector('["1/2", 3]')] == ["1/2", "3"]


def test_console_entry_point(k3_file):
    proc = subprocess.run([sys.executable, "-m", "pwv", "validate", k3_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "valid" in proc.stdout
