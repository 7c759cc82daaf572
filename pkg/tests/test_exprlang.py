import math
import string

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermocontact.chart import DarbouxPoint, finite_difference_gradient, random_point
from thermocontact.errors import DomainError
from thermocontact.exprlang import (
    GRAMMAR,
    MAX_DEPTH,
    BinOp,
    Call,
    ExprError,
    ExprSyntaxError,
    LexError,
    Neg,
    Num,
    Var,
    compile_field,
    compile_function,
    eval_with_gradient,
    evaluate,
    parse,
    to_source,
    tokenize,
    variables,
)

from expr_corpus import CORPUS


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)][:-1]


def test_tokenize_examples():
    assert kinds("exp(q1)") == [("ident", "exp"), ("lparen", "("), ("ident", "q1"), ("rparen", ")")]
    assert kinds("1/p1") == [("num", "1"), ("op", "/"), ("ident", "p1")]
    assert kinds(" 2.5e-3 *x ") == [("num", "2.5e-3"), ("op", "*"), ("ident", "x")]
    assert tokenize("1/p1")[-1].kind == "end"


def test_lex_error_position():
    with pytest.raises(LexError) as info:
        tokenize("w + $")
    assert info.value.pos == 4
    with pytest.raises(LexError):
        tokenize("1e999")


def test_double_caret_error_at_column_2():
    with pytest.raises(ExprError) as info:
        parse("2^^3")
    assert info.value.pos == 2
    assert "column 2" in str(info.value)


def test_precedence_examples():
    assert evaluate(parse("1+2*3"), {}) == 7.0
    assert evaluate(parse("2^3^2"), {}) == 512.0
    assert evaluate(parse("-q1^2"), {"q1": 2.0}) == -4.0
    assert evaluate(parse("(-q1)^2"), {"q1": 2.0}) == 4.0
    assert evaluate(parse("8/4/2"), {}) == 1.0
    assert evaluate(parse("8-4-2"), {}) == 2.0
    assert evaluate(parse("2^-1"), {}) == 0.5


def test_ast_shape():
    assert parse("-q1^2") == Neg(BinOp("^", Var("q1"), Num(2.0)))
    assert parse("a-b-c") == BinOp("-", BinOp("-", Var("a"), Var("b")), Var("c"))
    assert parse("exp(w)") == Call("exp", Var("w"))
    assert variables(parse("p1*exp(q1)+p1")) == {"p1", "q1"}


@pytest.mark.parametrize("src,pos", [
    ("", 0),
    ("(1+2", 4),
    ("1+", 2),
    ("1 2", 2),
    ("exp", 3),
    ("foo(1)", 0),
    (")", 0),
    ("2*(3))", 5),
])
def test_syntax_errors_are_positioned(src, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.pos == pos
    assert info.value.expected


def test_nesting_limit():
    with pytest.raises(ExprSyntaxError):
        parse("(" * (MAX_DEPTH + 5) + "1" + ")" * (MAX_DEPTH + 5))
    with pytest.raises(ExprSyntaxError):
        parse("-" * (MAX_DEPTH + 5) + "1")
    assert evaluate(parse("(" * 50 + "1" + ")" * 50), {}) == 1.0


def test_unknown_names_rejected():
    with pytest.raises(ExprSyntaxError) as info:
        compile_field("p1 + z", 1)
    assert info.value.pos == 5
    with pytest.raises(ExprSyntaxError):
        compile_field("p2", 1)


def test_domain_errors_name_the_subexpression():
    at = DarbouxPoint(0.0, [-1.0], [0.0])
    with pytest.raises(DomainError, match=r"ln\(p1\)"):
        compile_field("2*ln(p1)", 1).value(at)
    with pytest.raises(DomainError, match="sqrt"):
        compile_field("sqrt(p1)", 1).value(at)
    with pytest.raises(DomainError, match="division by zero"):
        compile_field("1/q1", 1).value(at)
    with pytest.raises(DomainError):
        compile_field("p1^0.5", 1).value(at)
    with pytest.raises(DomainError):
        compile_field("p1^w", 1).value(at)
    with pytest.raises(DomainError, match="overflow"):
        compile_field("exp(1000)", 1).value(at)
    assert compile_field("p1^3", 1).value(at) == -1.0


def test_eval_with_gradient_examples():
    at = DarbouxPoint(3.0, [1.0], [1.0])
    v, d = eval_with_gradient("w", at)
    assert v == 3.0 and d.coord.tolist() == [1.0, 0.0, 0.0]
    at = DarbouxPoint(0.0, [-2.0], [1.0])
    v, d = eval_with_gradient("1/p1", at)
    assert v == -0.5 and d.coord.tolist() == [0.0, -0.25, 0.0]
    at = DarbouxPoint(0.0, [2.0], [0.0])
    v, d = eval_with_gradient("exp(q1)*p1", at)
    assert v == 2.0 and d.coord.tolist() == [0.0, 1.0, 2.0]


def test_aliases():
    f = compile_field("T*q1", 1, aliases={"T": lambda c: -c[1]})
    assert f.value(DarbouxPoint(0.0, [-2.0], [3.0])) == 6.0


def test_compile_function():
    f = compile_function("s^2/2+ln(v)", ["s", "v"])
    assert f([2.0, 1.0]) == 2.0
    with pytest.raises(ExprSyntaxError):
        compile_function("u", ["s", "v"])


def test_grammar_text_mentions_precedence():
    assert "-x^2 means -(x^2)" in GRAMMAR


@pytest.mark.parametrize("src", CORPUS)
def test_corpus_print_parse_fixed_point(src):
    ast = parse(src)
    printed = to_source(ast)
    assert parse(printed) == ast
    assert to_source(parse(printed)) == printed


@pytest.mark.parametrize("src", CORPUS)
def test_corpus_gradient_matches_finite_differences(src):
    rng = np.random.default_rng(7)
    f = compile_field(src, 2)
    for _ in range(20):
        at = random_point(rng, 2)
        exact = f.differential(at).coord
        fd = finite_difference_gradient(f, at)
        scale = np.maximum(1.0, np.abs(exact))
        assert np.all(np.abs(exact - fd) <= 1e-6 * scale), (src, at, exact, fd)


def test_corpus_evaluation_matches_python():
    env = {"w": 0.7, "p1": -1.3, "p2": 0.4, "q1": 1.1, "q2": -0.6}
    py = {
        "exp(q1)*p1": math.exp(1.1) * -1.3,
        "ln(1+p1^2)": math.log(1 + 1.3 ** 2),
        "(1+q1^2)^(p2/3)": (1 + 1.1 ** 2) ** (0.4 / 3),
        "1/(1+exp(-q1))": 1 / (1 + math.exp(-1.1)),
    }
    for src, expected in py.items():
        assert evaluate(parse(src), env) == pytest.approx(expected, rel=1e-15)


ALPHABET = string.digits + "wpq12+-*/^().eE ,$" + "exptlnsqr"


def _check_fuzz(src):
    try:
        ast = parse(src)
    except ExprError as exc:
        assert isinstance(exc.pos, int) and 0 <= exc.pos <= len(src)
        return
    assert parse(to_source(ast)) == ast


@settings(max_examples=1000)
@given(st.text(alphabet=ALPHABET, max_size=256))
def test_fuzz_grammar_alphabet(src):
    _check_fuzz(src)


@settings(max_examples=300)
@given(st.text(max_size=256))
def test_fuzz_arbitrary_text(src):
    _check_fuzz(src)
