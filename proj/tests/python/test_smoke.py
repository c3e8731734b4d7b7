import json
import os
from pathlib import Path

import pytest

import relfix

DATA = Path(os.environ.get("RELFIX_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def g1():
    return relfix.Group.from_file(str(DATA / "g1.grp"))


@pytest.fixture(scope="module")
def g2():
    return relfix.Group.from_file(str(DATA / "g2.grp"))


def test_arithmetic(g1):
    assert g1.normal_form("a b b^-1 t") == "a t"
    assert g1.multiply(["a t", "t^-1 b"]) == "a b"
    assert g1.inverse("a t") == "t^-1 a^-1"
    assert g1.rel_length("a^3 t a") == 3
    assert g1.x_length("a^3 t a") == 5


def test_swap_fixes_powers_of_ab(g1):
    phi = g1.automorphism("phi1")
    assert phi("a") == "b"
    assert phi.inverse_image(phi("a t")) == "a t"
    fixed = phi.fixed(3, 3)
    assert sorted(fixed) == sorted(["1"] + [f"a^{k} b^{k}" for k in (-3, -2, -1, 2, 3)] + ["a b"])
    assert all(phi.is_fixed(w) for w in fixed)
    assert phi.qc_profile(3, 3)["estimate"]["sigma"] == 0


def test_inner_matches_centralizer(g2):
    for word in ("a", "c", "c a^-1 b d^2"):
        assert g2.inner(word).fixed(2, 1) == g2.centralizer(word, 2, 1)


def test_reports(g1, g2):
    assert g1.automorphism("phi1").bounded_generation(3, 3)["estimate"]["P"] == 1
    assert g1.automorphism("phi4").induced(3, 3)["estimate"]["classes"] == 1
    assert g2.automorphism("phi2").induced(3, 2)["estimate"]["classes"] == 0
    reports = g1.automorphism("phi1").verify("maln", 2, 2, seed=1)
    assert [r["name"] for r in reports] == ["maln"]
    assert reports[0]["violations"] == []
    assert "all" in relfix.suite_names()


def test_errors(g1):
    with pytest.raises(relfix.ParseError):
        g1.normal_form("a ^")
    with pytest.raises(KeyError):
        g1.automorphism("nope")
    # Group-level rejections carry a source position.
    with pytest.raises(relfix.ParseError):
        relfix.Group.from_text("factor A {abelian; gens a,b} free a")
    text = (DATA / "g1.grp").read_text() + "\naut bad { a -> a^2; b -> b; t -> t; inverse { a -> a; b -> b; t -> t } }\n"
    with pytest.raises(relfix.ValidationError):
        relfix.Group.from_text(text).automorphism("bad")


def test_cli_roundtrip(g1):
    args = ["fix", "enumerate", "--group", str(DATA / "g1.grp"), "--aut", "phi1", "--syl", "2", "--coord", "2"]
    status, out, err = relfix.run_command(args)
    assert status == 0, err
    doc = json.loads(out)
    assert doc["group_digest"] == g1.digest
    assert doc["per_check"][0]["estimate"]["fixed"] == 5
    assert relfix.run_command(["nope"])[0] == 2
