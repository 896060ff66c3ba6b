import io
import os

import pytest

from thinfill import corpus_path
from thinfill.cli import run
from thinfill.documents import (
    Document,
    documents_equal,
    parse_document,
    serialize_document,
)
from thinfill.errors import DocumentError

CORPUS = [
    "boundary-delta3", "rp2", "torus", "sphere2", "wedge-two-spheres",
    "circle", "point", "zmod2-deg1", "zmod3-deg1", "zmod2-deg2", "z-deg2",
    "zmod2-2-3-d", "crossed-z2", "crossed-z6", "crossed-z4-z2", "nerve-z3",
    "presentation-z2", "presentation-s3",
]


def corpus(name):
    return str(corpus_path(name))


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_corpus_roundtrips():
    for name in CORPUS:
        text = open(corpus(name)).read()
        doc = parse_document(text)
        again = serialize_document(doc)
        assert again == text
        assert documents_equal(doc, parse_document(again))


def test_malformed_documents_rejected():
    with pytest.raises(DocumentError):
        parse_document("no header\n")
    with pytest.raises(DocumentError):
        parse_document("thinfill 99\nkind: simplicial_set\n")
    with pytest.raises(DocumentError):
        parse_document("thinfill 1\nkind: mystery\n")
    with pytest.raises(DocumentError):
        parse_document("thinfill 1\nkind: chain_complex\ngens: 1\nrels 0 = 2x2 [ 1 ]\n")


def test_cli_determinism_double_run():
    for argv in (("homology", corpus("boundary-delta3")),
                 ("strict-invariants", corpus("rp2"), "--budget", "10000"),
                 ("ndk", corpus("crossed-z2"), "--dmax", "3")):
        c1, o1, _ = invoke(*argv)
        c2, o2, _ = invoke(*argv)
        assert (c1, o1) == (c2, o2)
        assert o1.encode() == o2.encode()


def test_cli_homology_boundary_delta3():
    code, out, err = invoke("homology", corpus("boundary-delta3"))
    assert code == 0
    assert "result H 0: Z" in out
    assert "result H 1: 0" in out
    assert "result H 2: Z" in out


def test_cli_homology_rp2():
    code, out, _ = invoke("homology", corpus("rp2"))
    assert code == 0
    assert "result H 1: Z/2" in out
    assert "result H 2: 0" in out


def test_cli_strict_invariants_rp2():
    code, out, _ = invoke("strict-invariants", corpus("rp2"), "--budget", "10000")
    assert code == 0
    assert "pi1 order: 2" in out
    assert "pi2: Z (homology of universal cover)" in out


def test_cli_strict_invariants_circle_inconclusive():
    code, out, err = invoke("strict-invariants", corpus("circle"), "--budget", "50")
    assert code == 1


def test_cli_pi1_inconclusive_budget():
    code, out, _ = invoke("pi1", corpus("circle"), "--budget", "40")
    assert code == 1
    assert "order: inconclusive" in out


def test_cli_validate_good_and_truncated():
    code, out, _ = invoke("validate", corpus("torus"))
    assert code == 0 and "result valid: yes" in out
    # nerve document is truncated at 4: reading above must fail loudly
    code, out, err = invoke("validate", corpus("nerve-z3"), "--dmax", "6")
    assert code == 1
    assert "truncation" in err or "exceeds" in err


def test_cli_tcheck_nerve():
    code, out, _ = invoke("tcheck", corpus("nerve-z3"), "--dmax", "3")
    assert code == 0
    assert "pass" in out


def test_cli_ndk_roundtrip():
    code, out, _ = invoke("ndk", corpus("crossed-z2"), "--dmax", "3")
    assert code == 0
    doc = parse_document(out[:out.index("result ")])
    assert doc.kind == "t_complex"


def test_cli_abcr():
    code, out, _ = invoke("abcr", corpus("crossed-z2"))
    assert code == 0
    assert "result group 0: Z" in out
    assert "result group 1: Z/2" in out


def test_cli_ucr_materialized():
    code, out, _ = invoke("ucr", corpus("z-deg2"))
    assert code == 0
    assert "result objects: 1" in out


def test_cli_ucr_symbolic(tmp_path):
    p = tmp_path / "z0.txt"
    p.write_text("thinfill 1\nkind: chain_complex\ngens: 1\n")
    code, out, err = invoke("ucr", str(p))
    assert code == 1
    assert "symbolic" in out


def test_cli_eta_check():
    code, out, _ = invoke("eta-check", corpus("zmod2-deg2"), "--dmax", "3")
    assert code == 0
    assert "result isomorphism: yes" in out


def test_cli_abst():
    code, out, _ = invoke("abst", corpus("nerve-z3"), "--dmax", "3")
    assert code == 0
    assert "result group 0: Z" in out
    assert "result group 1: Z/3" in out


def test_cli_gamma():
    code, out, _ = invoke("gamma", corpus("zmod2-deg2"), "--dmax", "4")
    assert code == 0
    assert "result gamma 2: Z/2" in out
    assert "result gamma 4: Z/2 + Z/2 + Z/2 + Z/2 + Z/2 + Z/2" in out


def test_cli_nz():
    code, out, _ = invoke("nz", corpus("rp2"))
    assert code == 0
    doc = parse_document(out[:out.index("result ")])
    assert doc.kind == "chain_complex"
    assert doc.payload.gens == (6, 15, 10)


def test_cli_cover():
    code, out, _ = invoke("cover", corpus("rp2"), "--budget", "100000")
    assert code == 0
    assert "result deck group order: 2" in out
    doc = parse_document(out[:out.index("result ")])
    assert doc.kind == "simplicial_set"
    assert len(doc.payload.cells[2]) == 20


def test_cli_coskeletal_check():
    code, out, _ = invoke("coskeletal-check", corpus("sphere2"),
                          "--skeletal", "2", "--dmax", "6")
    assert code == 0
    assert "result 3-coskeletal through 6: yes" in out


def test_cli_unit_compare():
    code, out, _ = invoke("unit-compare", corpus("torus"))
    assert code == 0
    assert "result verdict: proxy-verified" in out


def test_cli_thin_closure():
    code, out, _ = invoke("thin-closure", corpus("nerve-z3"), "--dmax", "3")
    assert code == 0
    assert "result cothin pairs: 0" in out


def test_cli_unknown_command_and_missing_file():
    code, _, _ = invoke("frobnicate", corpus("rp2"))
    assert code == 2
    code, _, err = invoke("homology", "/nonexistent/file.txt")
    assert code == 2


def test_cli_malformed_document(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("thinfill 1\nkind: simplicial_set\ncells zero: v\n")
    code, _, err = invoke("homology", str(p))
    assert code == 2
    assert "malformed" in err


def test_cli_output_flag(tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = invoke("homology", corpus("sphere2"), "--output", str(target))
    assert code == 0
    assert target.read_text() == out


def test_cli_presentation_validate():
    code, out, _ = invoke("validate", corpus("presentation-s3"))
    assert code == 0
