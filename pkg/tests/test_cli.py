import io
import json
import pathlib
import subprocess
import sys

import jsonschema
import pytest

from growthcertify.cli import GroupSpec, load_spec, run, spec_from_dict, spec_to_dict
from growthcertify.errors import SpecError

from corpus import corpus

ROOT = pathlib.Path(__file__).resolve().parents[1]
SPECS = ROOT / "specs"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    report = json.loads(out.getvalue()) if out.getvalue() else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
    return code, report, err.getvalue()


def instance_to_doc(E, T):
    return spec_to_dict(GroupSpec(E, T, []))


def test_certify_fibonacci():
    code, report, _ = invoke("certify", SPECS / "fib.json")
    assert code == 0
    result = report["result"]
    assert result["kind"] == "FreeBasis"
    assert result["entropy_lower"] >= 0.1831
    assert report["input_digest"].startswith("sha256:")
    assert report["trace"]["algorithm"] == "two_free"


def test_certify_identity_action():
    code, report, _ = invoke("certify", SPECS / "identity-aut.json")
    assert code == 10
    assert report["result"]["kind"] == "LawCertificate"
    assert report["result"]["structure"] == "Abelian"


def test_certify_klein_and_general_law():
    code, report, _ = invoke("certify", SPECS / "klein.json")
    assert code == 10 and report["result"]["structure"] == "CyclicByAbelian"
    code, report, _ = invoke("certify", SPECS / "fib.json", "--law", "x1^2 x2^2 X1^2 X2^2")
    assert code == 0 and report["trace"]["algorithm"] == "law_general"


def test_fold():
    code, report, _ = invoke("fold", "--rank", "2", "abAB", "a")
    assert code == 0
    assert report["result"]["class"] == "NonAbelianFree" and report["result"]["rank"] == 2
    code, report, _ = invoke("fold", "--rank", "2", "aa", "aaa")
    assert report["result"]["class"] == "InfiniteCyclic" and report["result"]["basis"] == ["a"]


def test_growth_complete_partial_and_csv(tmp_path):
    path = tmp_path / "census.csv"
    code, report, _ = invoke("growth", SPECS / "fib.json", "--radius", "4", "--csv", path, "--certify")
    assert code == 0
    assert report["result"]["census"]["counts"] == [1, 5, 17, 53, 147]
    assert report["result"]["lower_bound"] >= 0.1831
    assert report["result"]["subadditive"] is True
    assert path.read_text().splitlines()[0] == "n,B_n,ln(B_n)/n"
    code, report, _ = invoke("growth", SPECS / "fib.json", "--radius", "8", "--cap", "100")
    assert code == 11
    assert report["result"]["partial"] is True
    assert report["result"]["census"]["counts"] == [1, 5, 17, 53]


def test_law_subcommands():
    code, report, _ = invoke("law", "compose", "commutator", "x1^2")
    assert code == 0 and report["result"]["law"]["body"] == "x1^2 x2^2 X1^2 X2^2"
    code, report, _ = invoke("law", "eval", "commutator", "--rank", "2", "a", "b")
    assert code == 0 and report["result"]["value"] == "abAB"
    code, report, _ = invoke("law", "check", SPECS / "klein.json", "--law", "metabelian")
    assert code == 0 and report["result"]["holds"] is True
    code, report, _ = invoke("law", "check", SPECS / "fib.json", "--law", "commutator", "--radius", "1")
    assert code == 12 and report["result"]["holds"] is False


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "/nonexistent.json"],
        ["fold", "--rank", "2", "abc"],
        ["law", "compose", "x1 y", "x1"],
        ["growth", "specs/fib.json"],
        ["bogus"],
    ],
)
def test_failures_exit_nonzero(argv):
    code, report, _ = invoke(*argv)
    assert code == 1 and report is None


def test_spec_diagnostics_are_addressed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kernel_rank": 2,\n "generators": [}')
    with pytest.raises(SpecError) as info:
        load_spec(str(bad))
    assert ":2:" in str(info.value)
    doc = json.loads((SPECS / "fib.json").read_text())
    doc["generators"][1]["word"] = "q"
    with pytest.raises(SpecError, match=r"generators\[1\]\.word"):
        spec_from_dict(doc)
    doc = json.loads((SPECS / "fib.json").read_text())
    doc["automorphisms"][0]["inverse_images"] = ["Ba", "a"]
    with pytest.raises(SpecError, match=r"automorphisms\[0\]"):
        spec_from_dict(doc)
    doc = json.loads((SPECS / "fib.json").read_text())
    doc["generators"][0]["shift"] = [1, 2]
    with pytest.raises(SpecError, match=r"generators\[0\]\.shift"):
        spec_from_dict(doc)


def test_spec_round_trip():
    for path in sorted(SPECS.glob("*.json")):
        spec, _ = load_spec(str(path))
        again = spec_from_dict(json.loads(json.dumps(spec_to_dict(spec))))
        assert spec_to_dict(again) == spec_to_dict(spec)
        assert again.group.auts == spec.group.auts
        assert list(again.generators) == list(spec.generators)
        assert again.laws == spec.laws


def test_corpus_reports_validate(tmp_path):
    for i, (E, T) in enumerate(corpus(n_random=30, n_law=6)):
        path = tmp_path / f"g{i}.json"
        path.write_text(json.dumps(instance_to_doc(E, T)))
        code, report, _ = invoke("certify", path)
        assert code in (0, 10)
        code, report, _ = invoke("growth", path, "--radius", "3", "--cap", "100000")
        assert code in (0, 11)


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "growthcertify", "fold", "--rank", "2", "a", "b"],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["class"] == "NonAbelianFree"
