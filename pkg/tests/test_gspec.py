import json

import pytest

from superaffine.gspec import (
    JacobiViolation,
    ParseError,
    abelian,
    build_gspec,
    builtin_gspec,
    check_jacobi,
    load_gspec,
    load_gspec_file,
    resolve_gspec,
)


def test_builtins(sl2, osp12):
    assert sl2.dim == 3 and sl2.parities == (0, 0, 0) and sl2.perfect
    assert osp12.dim == 5 and osp12.parities == (0, 0, 0, 1, 1) and osp12.perfect
    assert builtin_gspec("osp(1|2)") == osp12
    assert sl2.warnings == []


def test_builtin_tables_pass_jacobi(sl2, osp12):
    for g in (sl2, osp12):
        assert check_jacobi(g.basis_names, g.parities, g.structure_constants) is None


def test_abelian_not_perfect():
    g = abelian(1)
    assert not g.perfect
    assert g.warnings and "NotPerfect" in g.warnings[0]


def test_antisymmetry_violation_is_parse_error():
    doc = {"basis": ["a", "b", "c"], "parity": [0, 0, 0], "brackets": {"a,b": [["c", 1]], "b,a": [["c", 1]]}}
    with pytest.raises(ParseError, match="antisymmetry"):
        load_gspec(doc)


def test_parity_violation():
    with pytest.raises(ParseError, match="parity"):
        build_gspec("x", ["a", "b"], [0, 1], {(0, 0): {1: 1}})


def test_jacobi_violation_reports_triple():
    # [a,b]=b, [a,c]=c, [b,c]=a fails Jacobi
    with pytest.raises(JacobiViolation) as info:
        build_gspec("bad", ["a", "b", "c"], [0, 0, 0], {(0, 1): {1: 1}, (0, 2): {2: 1}, (1, 2): {0: 1}})
    assert len(info.value.triple) == 3


def test_roundtrip_document(sl2, tmp_path):
    doc = sl2.to_document()
    assert load_gspec(doc) == sl2
    p = tmp_path / "sl2.json"
    p.write_text(json.dumps(doc))
    assert resolve_gspec(f"@{p}").structure_constants == sl2.structure_constants


def test_resolve_errors(tmp_path):
    assert resolve_gspec(None) is None and resolve_gspec("none") is None
    with pytest.raises(ParseError):
        resolve_gspec("e8")
    with pytest.raises(ParseError):
        load_gspec_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        resolve_gspec(f"@{bad}")
