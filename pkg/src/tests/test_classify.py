# SPDX-License-Identifier: MIT
import random

import pytest
import sympy

from src.main.app.core.expr import t, u, x
from src.main.app.core.parser import parse
from src.main.app.enums.enum import FamilyTag
from src.main.app.exception import AnalysisErrorCode, AnalysisException
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import FFamily
from src.main.app.model.field_model import VectorField
from src.main.app.service.impl.classify_service_impl import spans_agree


@pytest.mark.parametrize(
    "text, tag, params",
    [
        ("u^2/2 + u", FamilyTag.QUADRATIC, {"d": sympy.Rational(1, 2), "b": 1, "c": 0}),
        ("2*(3*u + 1)^3 + u + 5", FamilyTag.POWER, {"d": 2, "a": 3, "b": 1, "n": 3, "c": 5}),
        ("log(u + 2) + u", FamilyTag.LOG, {"d": 1, "a": 1, "b": 2, "k": 1}),
        ("exp(2*u)", FamilyTag.EXP, {"d": 1, "a": 2, "k": 0}),
        ("u^3 + u*exp(u)", FamilyTag.ARBITRARY, {}),
    ],
)
def test_detect_family(classifier, text, tag, params):
    family = classifier.detect_family(FSpec(parse(text)))
    assert family.tag == tag
    for name, value in params.items():
        assert family[name] == value, name


def test_symbolic_f_is_arbitrary(classifier):
    assert classifier.detect_family(FSpec()).tag == FamilyTag.ARBITRARY


def test_quadratic_as_power():
    family = FFamily.quadratic(d=1, b=0, c=0).as_power()
    assert family.tag == FamilyTag.POWER
    assert family["b"] == sympy.Rational(-1, 2)
    assert sympy.expand(family.f_expr() - u**2) == 0


def test_invalid_family_parameters():
    with pytest.raises(AnalysisException):
        FFamily.power(n=1)
    with pytest.raises(AnalysisException):
        FFamily.log(a=0)


def test_generators_for_quadratic(classifier):
    generators = dict(classifier.generators_for(FFamily.quadratic(d=1)))
    assert generators["V3"] == VectorField(x, 2 * t, -2 * u + 1)


def test_generators_for_power(classifier):
    generators = dict(classifier.generators_for(FFamily.power(d=2, a=3, b=1, n=3)))
    assert generators["V3"] == VectorField(x, 2 * t, -u - sympy.Rational(1, 3))


def test_non_unit_linear_coefficient_keeps_translations(classifier):
    generators = classifier.generators_for(FFamily.exp(a=2, k=0))
    assert [name for name, _ in generators] == ["V1", "V2"]


@pytest.mark.parametrize("text", ["u^2/2 + u", "2*(3*u + 1)^3 + u", "exp(2*u)"])
def test_ansatz_agrees_with_families(classifier, text):
    result = classifier.classify(FSpec(parse(text)))
    assert result.spans_agree
    assert len(result.ansatz.fields) == len(result.generators)


def test_ansatz_for_arbitrary_f(classifier):
    solution = classifier.ansatz_solve(FSpec())
    assert len(solution.fields) == 2
    assert spans_agree(solution.fields, [VectorField.translation_x(), VectorField.translation_t()])


def test_classify_without_ansatz(classifier):
    result = classifier.classify(FSpec(parse("u^2/2 + u")), with_ansatz=False)
    assert result.ansatz is None
    assert result.spans_agree is None
    assert len(result.generators) == 3


@pytest.mark.parametrize("text", ["(u + 1)^2", "u^2 + 2*u", "3*(2*u - 1)^2 + 5"])
def test_every_quadratic_is_quadratic(classifier, text):
    result = classifier.classify(FSpec(parse(text)))
    assert result.family.tag == FamilyTag.QUADRATIC
    assert [name for name, _ in result.generators] == ["V1", "V2", "V3"]
    assert result.spans_agree
    assert len(result.ansatz.fields) == 3


@pytest.mark.parametrize("text", ["(u + 1)^2", "u^2 + 2*u", "2*(u + 1)^3 + 3*u"])
def test_ansatz_fields_are_symmetries(classifier, determining, text):
    f = FSpec(parse(text))
    solution = classifier.ansatz_solve(f)
    assert len(solution.fields) >= 2
    for field in solution.fields:
        assert determining.verify_generator(f, field).passed, field


def test_ansatz_without_unit_linear_coefficient(classifier):
    result = classifier.classify(FSpec(parse("2*(u + 1)^3 + 3*u")))
    assert result.family.tag == FamilyTag.POWER
    assert len(result.ansatz.fields) == 2
    assert result.spans_agree


def _nonzero(rng: random.Random) -> sympy.Rational:
    return rng.choice([-1, 1]) * sympy.Rational(rng.randint(1, 4), rng.randint(1, 3))


def _random_family(tag: FamilyTag, rng: random.Random) -> FFamily:
    d = _nonzero(rng)
    a = sympy.Rational(rng.randint(1, 3), rng.randint(1, 2))
    b, c = rng.randint(0, 2), rng.randint(-2, 2)
    if tag == FamilyTag.POWER:
        return FFamily.power(d=d, a=a, b=b, n=rng.choice([3, 4, -1, -2]), c=c)
    if tag == FamilyTag.LOG:
        return FFamily.log(d=d, a=a, b=b + 1, c=c)
    return FFamily.exp(d=d, a=a, b=b, c=c)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("tag", [FamilyTag.POWER, FamilyTag.LOG, FamilyTag.EXP])
def test_classification_of_random_family_members(classifier, determining, tag, seed):
    family = _random_family(tag, random.Random(seed))
    f = FSpec(family.f_expr())
    result = classifier.classify(f)
    assert result.family.tag == tag
    generators = dict(result.generators)
    assert determining.verify_generator(f, generators["V3"]).passed
    assert result.spans_agree
    assert len(result.ansatz.fields) == 3


def _random_non_family(index: int, rng: random.Random):
    c1, c2 = _nonzero(rng), _nonzero(rng)
    return [
        c1 * u**4 + c2 * u**2,
        c1 * u**3 + sympy.exp(c2 * u),
        c1 * u * sympy.exp(u),
        sympy.log(u + 2) + c2 * u**2,
        c1 * u**5 + c2 * u**2 + u,
    ][index]


@pytest.mark.parametrize("index", range(5))
def test_random_non_family_f_keeps_translations(classifier, index):
    f = FSpec(_random_non_family(index, random.Random(100 + index)))
    assert classifier.detect_family(f).tag == FamilyTag.ARBITRARY
    solution = classifier.ansatz_solve(f)
    translations = [VectorField.translation_x(), VectorField.translation_t()]
    assert len(solution.fields) == 2
    assert spans_agree(solution.fields, translations)


@pytest.mark.parametrize("text", ["f(u) + u^2", "2*f(u)", "f(u) - u"])
def test_unknown_nonlinearity_must_stand_alone(text):
    with pytest.raises(AnalysisException) as exc:
        FSpec(parse(text))
    assert exc.value.code == AnalysisErrorCode.INVALID_FAMILY


def test_bare_unknown_nonlinearity_is_symbolic():
    assert FSpec(parse("f(u)")).is_symbolic
