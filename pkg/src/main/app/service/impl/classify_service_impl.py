# SPDX-License-Identifier: MIT
"""Classification service implementation"""

from __future__ import annotations

from collections import defaultdict

import sympy
from fastlib.logging import logger

from src.main.app.core.expr import F, Expr, normalize, substitute_unknowns, t, u, x
from src.main.app.core.jet import render_generator
from src.main.app.core.parser import render
from src.main.app.enums.enum import FamilyTag
from src.main.app.model.equation_model import FSpec
from src.main.app.model.family_model import AnsatzSolution, Classification, FFamily
from src.main.app.model.field_model import Candidate, VectorField
from src.main.app.service.classify_service import ClassifyService
from src.main.app.service.determining_service import DeterminingService
from src.main.app.service.impl.determining_service_impl import DeterminingServiceImpl

THETA = sympy.symbols("alpha1 alpha2 beta1 beta2 gamma1 gamma2")


def _affine_in_u(term: Expr) -> bool:
    return term.is_polynomial(u) and sympy.degree(term, u) <= 1


def _linear_in_u(e: Expr) -> tuple[Expr, Expr] | None:
    """(a, b) with e = a u + b, or None."""
    e = sympy.expand(e)
    if not e.is_polynomial(u) or sympy.degree(e, u) != 1:
        return None
    a = e.coeff(u, 1)
    return a, sympy.expand(e - a * u)


def affine_coordinates(field: VectorField) -> tuple[Expr, ...]:
    """(α1, α2, β1, β2, γ1, γ2) of p = α1 x + α2, q = β1 t + β2, r = γ1 u + γ2."""
    p, q, r = field.components()
    return (
        sympy.diff(p, x),
        p.subs(x, 0),
        sympy.diff(q, t),
        q.subs(t, 0),
        sympy.diff(r, u),
        r.subs(u, 0),
    )


def spans_agree(first: list[VectorField], second: list[VectorField]) -> bool:
    a = sympy.Matrix([affine_coordinates(v) for v in first]) if first else sympy.zeros(0, 6)
    b = sympy.Matrix([affine_coordinates(v) for v in second]) if second else sympy.zeros(0, 6)
    rank_a = a.rank(simplify=True)
    rank_b = b.rank(simplify=True)
    return rank_a == rank_b == a.col_join(b).rank(simplify=True)


class ClassifyServiceImpl(ClassifyService):
    def __init__(self, determining: DeterminingService | None = None):
        self.determining = determining or DeterminingServiceImpl()

    def detect_family(self, f: FSpec) -> FFamily:
        if f.is_symbolic:
            return FFamily(FamilyTag.ARBITRARY)
        expr = f.expr
        linear = [term for term in sympy.Add.make_args(expr) if _affine_in_u(term)]
        special = [term for term in sympy.Add.make_args(expr) if not _affine_in_u(term)]
        affine = sympy.expand(sympy.Add(*linear))
        k, c = affine.coeff(u, 1), affine.coeff(u, 0)

        family = None
        if len(special) == 1:
            family = self._match_core(special[0], k, c)
        if family is None and expr.is_polynomial(u) and sympy.degree(expr, u) == 2:
            poly = sympy.Poly(expr, u)
            family = FFamily.quadratic(
                d=poly.coeff_monomial(u**2), b=poly.coeff_monomial(u), c=poly.coeff_monomial(1)
            )
        if family is None or normalize(family.f_expr() - expr) != 0:
            family = FFamily(FamilyTag.ARBITRARY, source=expr)
        logger.info(f"f = {render(expr)} detected as {family.tag.value}")
        return family

    @staticmethod
    def _match_core(term: Expr, k: Expr, c: Expr) -> FFamily | None:
        d, core = term.as_independent(u, as_Add=False)
        if isinstance(core, (sympy.exp, sympy.log)):
            linear = _linear_in_u(core.args[0])
            if linear is None:
                return None
            a, b = linear
            builder = FFamily.exp if isinstance(core, sympy.exp) else FFamily.log
            return builder(d=d, a=a, b=b, k=k, c=c)
        if isinstance(core, sympy.Pow):
            base, n = core.as_base_exp()
            if n.has(u):
                return None
            linear = _linear_in_u(base)
            if linear is None:
                return None
            a, b = linear
            if n == 2:
                poly = sympy.Poly(sympy.expand(d * base**2 + k * u + c), u)
                return FFamily.quadratic(
                    d=poly.coeff_monomial(u**2),
                    b=poly.coeff_monomial(u),
                    c=poly.coeff_monomial(1),
                )
            return FFamily.power(d=d, a=a, b=b, n=n, k=k, c=c)
        return None

    def generators_for(self, family: FFamily) -> list[tuple[str, VectorField]]:
        generators = [("V1", VectorField.translation_x()), ("V2", VectorField.translation_t())]
        if not family.has_unit_linear_coefficient():
            return generators
        fam = family.as_power()
        p = fam.params
        if fam.tag == FamilyTag.POWER:
            r = 2 / (p["a"] * (1 - p["n"])) * (p["a"] * u + p["b"])
        elif fam.tag == FamilyTag.LOG:
            r = 2 / p["a"] * (p["a"] * u + p["b"])
        else:
            r = -2 / p["a"]
        generators.append(("V3", VectorField(x, 2 * t, sympy.expand(r))))
        return generators

    def ansatz_solve(self, f: FSpec) -> AnsatzSolution:
        system = self.determining.build_classical(FSpec())
        a1, a2, b1, b2, g1, g2 = THETA
        candidate = Candidate(a1 * x + a2, b1 * t + b2, g1 * u + g2)
        substitution = None if f.is_symbolic else self.detect_family(f).substitution()
        var = u if substitution is None else substitution[0]

        # keyed by (equation index, monomial): each equation vanishes on its own
        groups: dict[tuple[int, Expr], Expr] = defaultdict(lambda: sympy.Integer(0))
        constraints: list[Expr] = []
        for index, equation in enumerate(system.equations):
            value = f.instantiate(substitute_unknowns(equation, candidate.functions()))
            if substitution is not None:
                value = value.xreplace({u: substitution[1]})
            numerator = sympy.expand(sympy.fraction(sympy.together(sympy.expand(value)))[0])
            functional = sympy.Integer(0)
            for term in sympy.Add.make_args(numerator):
                coefficient, theta = term.as_independent(*THETA, as_Add=False)
                rest, key = coefficient.as_independent(x, t, var, as_Add=False)
                groups[index, key] += rest * theta
                if key.has(F):
                    functional += term
            if functional != 0:
                constraints.append(functional)

        equations = [e for e in groups.values() if sympy.expand(e) != 0]
        fields = self._null_fields(equations)
        notes: list[str] = []
        if f.is_symbolic:
            free = [
                e
                for (_, key), e in groups.items()
                if not key.has(F) and sympy.expand(e) != 0
            ]
            relaxed = self._null_vectors(free)
            if len(relaxed) > len(fields):
                notes = self._branch_notes(relaxed, constraints)
        logger.info(f"Affine ansatz found {len(fields)} generators")
        return AnsatzSolution(fields=fields, notes=notes)

    @staticmethod
    def _null_vectors(equations: list[Expr]) -> list[sympy.Matrix]:
        if not equations:
            return [sympy.eye(6).row(i).T for i in range(6)]
        matrix, _ = sympy.linear_eq_to_matrix(equations, THETA)
        return matrix.nullspace(simplify=True)

    def _null_fields(self, equations: list[Expr]) -> list[VectorField]:
        vectors = self._null_vectors(equations)
        if not vectors:
            return []
        basis, _ = sympy.Matrix.hstack(*vectors).T.rref(simplify=True)
        fields = []
        for i in range(basis.rows):
            row = [sympy.factor(sympy.cancel(v)) for v in basis.row(i)]
            if all(v == 0 for v in row):
                continue
            a1, a2, b1, b2, g1, g2 = row
            fields.append(VectorField(a1 * x + a2, b1 * t + b2, sympy.expand(g1 * u + g2)))
        # translations first
        fields.sort(key=lambda v: (sympy.diff(v.p, x) != 0, render_generator(v)))
        return fields

    @staticmethod
    def _branch_notes(relaxed: list[sympy.Matrix], constraints: list[Expr]) -> list[str]:
        weights = sympy.symbols(f"c1:{len(relaxed) + 1}")
        general = sum((w * v for w, v in zip(weights, relaxed)), sympy.zeros(6, 1))
        mapping = dict(zip(THETA, general))
        notes = []
        for constraint in constraints:
            reduced = sympy.factor(sympy.expand(constraint.xreplace(mapping)))
            if reduced != 0:
                notes.append(f"additional generators require {render(reduced)} = 0")
        return notes

    def classify(self, f: FSpec, *, with_ansatz: bool = True) -> Classification:
        family = self.detect_family(f)
        generators = self.generators_for(family)
        result = Classification(family=family, generators=generators)
        if with_ansatz:
            result.ansatz = self.ansatz_solve(f)
            result.spans_agree = spans_agree([v for _, v in generators], result.ansatz.fields)
        return result
