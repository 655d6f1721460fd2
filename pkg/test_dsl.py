#!/usr/bin/env python3
"""
Pruebas del lenguaje de entrada: análisis, errores con posición,
impresión y elaboración de los ejemplos incluidos
"""
import pytest

from gpdkit.core.deaconu import StarCommutingSystem
from gpdkit.core.dsl import Document, Matrix, MatrixList, elaborate, emit_document, load, parse, print_document
from gpdkit.core.errors import (DslArityError, DslElaborationError, DslReferenceError, DslSyntaxError,
                               StructureError)
from gpdkit.core.examples import EXAMPLES, example_document, skew_action
from gpdkit.core.fell import FellLeftAction
from gpdkit.core.groupoid import validate_groupoid
from gpdkit.core.selfsimilar import check_left_axioms

TRIVIAL = """[groupoid E]
elements = e
units = e
src e = e
rng e = e
inv e = e
mul e e = e
"""


@pytest.fixture(scope="module")
def swap_text(fixtures_dir):
    return (fixtures_dir / "swap.gpd").read_text(encoding="utf-8")


def test_parse_fixture_blocks(swap_text):
    doc = parse(swap_text)
    assert [(b.kind, b.name) for b in doc.blocks] == [
        ("groupoid", "Z2"), ("groupoid", "P2"), ("left-action", "swap"),
        ("fell-bundle", "CP2"), ("fell-action", "swapB")]
    basis = doc.block("CP2").statements[-1]
    assert basis.key == "basis" and basis.args == ("p1_1",)
    assert isinstance(basis.values[0], MatrixList)


def test_elaborate_fixture(swap_text):
    ws = load(swap_text)
    assert ws.names("groupoid") == ["Z2", "P2"]
    assert validate_groupoid(ws.get("P2", "groupoid")).ok
    assert check_left_axioms(ws.get("swap", "left-action")).ok
    assert isinstance(ws.get("swapB"), FellLeftAction)
    with pytest.raises(TypeError):
        ws.get("swap", "groupoid")


def test_dr_fixture(fixtures_dir):
    ws = load((fixtures_dir / "z6.gpd").read_text(encoding="utf-8"))
    sys = ws.get("z6", "dr-system")
    assert isinstance(sys, StarCommutingSystem)
    assert sys.S == (2, 3, 4, 5, 0, 1)
    assert sys.T == (3, 4, 5, 0, 1, 2)
    assert ws.windows["z6"] == 2


def test_empty_and_comment_only_documents():
    assert parse("") == Document()
    assert parse("# nada\n\n# otra\n") == Document()


def test_trivial_groupoid_without_trailing_newline():
    ws = load(TRIVIAL.rstrip("\n"))
    assert ws.get("E").size == 1


def test_syntax_error_has_position():
    with pytest.raises(DslSyntaxError) as info:
        parse("[groupoid A]\nelements = a\nsrc a a\n")
    assert info.value.line == 3
    assert info.value.kind == "syntax"


def test_duplicate_block_names():
    with pytest.raises(DslReferenceError) as info:
        parse(TRIVIAL + "\n" + TRIVIAL)
    assert info.value.line == 9


@pytest.mark.parametrize("text, error", [
    (TRIVIAL + "foo = e\n", DslReferenceError),
    (TRIVIAL + "src = e\n", DslArityError),
    ("[groupoid A]\nelements = a\nunits = a\n", DslElaborationError),
    (TRIVIAL.replace("inv e = e", "inv e = f"), DslReferenceError),
    ("[left-action L]\nH = Nada\nX = Nada\n", DslReferenceError),
    (TRIVIAL + "\n[left-action L]\nH = E\nX = E\nrho0 e = e\nact e e = e\n", DslElaborationError),
], ids=["unknown-key", "arity", "missing-src", "unknown-element", "undefined-ref", "partial-action"])
def test_errors_have_kind_and_line(text, error):
    with pytest.raises(error) as info:
        load(text)
    assert info.value.line >= 1


def test_print_round_trip(swap_text):
    doc = parse(swap_text)
    assert parse(print_document(doc)) == doc


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_elaborate(name):
    doc = example_document(name)
    ws = elaborate(doc)
    assert ws.names() == [b.name for b in doc.blocks]
    assert parse(print_document(doc)) == doc


def test_s4_example_document():
    doc = example_document("s4")
    assert len(doc.blocks) == 3
    ws = elaborate(doc)
    action = ws.get(ws.names("left-action")[0])
    assert action.X.size == 72
    assert check_left_axioms(action).ok


def test_emit_rejects_dangling_references():
    with pytest.raises(StructureError):
        emit_document({"skew": skew_action()})


def test_unknown_example():
    with pytest.raises(KeyError):
        example_document("nada")


def test_basis_accepts_comma_separated_matrices():
    text = "[fell-bundle B]\nbase = E\ndim e = 1\nbasis e = [[1,0],[0,1]]\n"
    basis = parse(text).block("B").statements[-1]
    assert basis.values[0].items == (Matrix(((1 + 0j,),)), Matrix(((1j,),)))


def test_comma_and_space_forms_agree():
    spaced = parse("[fell-bundle B]\nbasis e = [[1 0; 0 0] [0 0; 0 1]]\n")
    commas = parse("[fell-bundle B]\nbasis e = [[1 0; 0 0],[0 0; 0 1]]\n")
    assert spaced == commas
    assert "[[1.0 0.0; 0.0 0.0],[0.0 0.0; 0.0 1.0]]" in print_document(commas)


def test_shipped_s4_fixture_matches_example(fixtures_dir):
    doc = parse((fixtures_dir / "s4.gpd").read_text(encoding="utf-8"))
    assert doc == example_document("s4")
    action = elaborate(doc).get("s4", "left-action")
    assert (action.H.size, action.X.size, len(action.X.units)) == (8, 72, 24)
