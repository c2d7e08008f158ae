import math
from collections import Counter

import pytest

from eph_scenarios import (
    DEFAULT_TABLES, arrow_curves, check_focal_K, check_parabolic_vertices, evaluate_checks, expected_focal_value,
    fit_parabola, focal_report, future_past_frames, generate_arrows, generate_orbits,
    generate_transverses, in_limits, is_constant_step, node_params, pair_deviation,
    render_check_text, render_vector_fields,
)
from pydantic import ValidationError

from errors import DegenerateAbscissaeError, IndexOutOfRangeError
from models import (
    FocalCheckReport, MetricKind, MoebiusVariant, NodeParams, ParabolaCheck, ParabolaFit, PlanePoint, ScenarioBatch,
    Subgroup, TuningTables,
)
from moebius import moebius_family


@pytest.fixture(scope="module")
def orbits_K():
    """Órbitas K das três geometrias"""
    return {kind: generate_orbits(Subgroup.K, kind) for kind in MetricKind}


@pytest.fixture(scope="module")
def orbits_A_parabolic():
    return generate_orbits(Subgroup.A, MetricKind.PARABOLIC)


@pytest.fixture(scope="module")
def frames():
    return future_past_frames()


class TestNodeParams:
    """Testes das substituições de cada nó"""

    def test_A_angle(self):
        """Testa A parabólico: vval = vi/(limite-1), semente no círculo unitário"""
        node = node_params(Subgroup.A, MetricKind.PARABOLIC, 7, 0.5)
        assert node.vval == pytest.approx(7 / 19)
        assert node.t == 0.5
        assert node.x == pytest.approx(math.cos(math.pi * 7 / 19))
        assert node.y == pytest.approx(math.sin(math.pi * 7 / 19))

    def test_A_hyperbolic_doubled(self):
        """Testa o conjunto duplo do caso hiperbólico"""
        node = node_params(Subgroup.A, MetricKind.HYPERBOLIC, 29, 0.0)
        assert node.vval == pytest.approx(2.0)
        assert node.x == pytest.approx(1.0)

    def test_N_hyperbolic_mirrored(self):
        """Testa índices espelhados de N hiperbólico"""
        assert node_params(Subgroup.N, MetricKind.HYPERBOLIC, 0, 1.0).y == -100
        assert node_params(Subgroup.N, MetricKind.HYPERBOLIC, 9, 1.0).y == 0
        assert node_params(Subgroup.N, MetricKind.HYPERBOLIC, 13, 1.0).y == 1.0
        assert node_params(Subgroup.N, MetricKind.ELLIPTIC, 5, 1.0).y == 2.0

    def test_K_scales_parameter(self):
        """Testa t = f π para K"""
        node = node_params(Subgroup.K, MetricKind.ELLIPTIC, 4, 0.25)
        assert node.t == pytest.approx(math.pi / 4)
        assert (node.x, node.y) == (0.0, 1.0)

    @pytest.mark.parametrize("field", ["t", "x", "y", "vval"])
    def test_non_finite_rejected(self, field):
        """Testa que parâmetros não finitos são rejeitados"""
        values = {"t": 0.0, "x": 0.0, "y": 1.0, "vval": 1.0}
        values[field] = math.nan
        with pytest.raises(ValidationError):
            NodeParams(**values)
        values[field] = math.inf
        with pytest.raises(ValidationError):
            NodeParams(**values)

    @pytest.mark.parametrize("vi", [-1, 10])
    def test_index_out_of_range(self, vi):
        """Testa índice de órbita inválido"""
        with pytest.raises(IndexOutOfRangeError):
            node_params(Subgroup.K, MetricKind.ELLIPTIC, vi, 0.0)


class TestInLimits:
    """Testes da área limitada"""

    def test_box(self):
        """Testa o retângulo |u|, |v| <= 8.5"""
        assert not in_limits(PlanePoint(u=9.0, v=0.0), MetricKind.ELLIPTIC, False, False)
        assert in_limits(PlanePoint(u=0.0, v=-5.0), MetricKind.ELLIPTIC, False, False)
        assert in_limits(PlanePoint(u=8.5, v=8.5), MetricKind.PARABOLIC, True, False)

    def test_hyperbolic_half_plane(self):
        """Testa semiplano superior para pontos diretos hiperbólicos"""
        assert not in_limits(PlanePoint(u=0.0, v=-0.1), MetricKind.HYPERBOLIC, False, False)
        assert in_limits(PlanePoint(u=1.0, v=0.0), MetricKind.HYPERBOLIC, False, False)

    def test_hyperbolic_cayley_bound(self):
        """Testa -u² + v² - 1.001 <= 0 para imagens de Cayley hiperbólicas"""
        assert in_limits(PlanePoint(u=0.0, v=1.0004), MetricKind.HYPERBOLIC, True, False)
        assert not in_limits(PlanePoint(u=0.0, v=1.0005), MetricKind.HYPERBOLIC, True, False)
        assert in_limits(PlanePoint(u=2.0, v=2.0), MetricKind.HYPERBOLIC, True, False)

    def test_inversion_skips_restriction(self):
        """Testa que a inversão dispensa o semiplano"""
        assert in_limits(PlanePoint(u=0.0, v=-1.0), MetricKind.HYPERBOLIC, False, True)

    def test_hyperbolic_K_leaves_limits(self):
        """Testa que a órbita K hiperbólica sai do semiplano"""
        point = moebius_family(Subgroup.K, MetricKind.HYPERBOLIC, MoebiusVariant.DIRECT, 1.0,
                               PlanePoint(u=0.0, v=2.0))
        assert not in_limits(point, MetricKind.HYPERBOLIC, False, False)


class TestParabolaFit:
    """Testes do ajuste de parábolas"""

    def test_exact_fit(self):
        """Testa v = 2u² - 3u + 1 pelos pontos u = 0, 1, 2"""
        fit = fit_parabola(PlanePoint(u=0, v=1), PlanePoint(u=1, v=0), PlanePoint(u=2, v=3))
        assert (fit.a, fit.b, fit.c) == pytest.approx((2.0, -3.0, 1.0))
        assert fit.focal_l == pytest.approx(0.125)
        assert fit.focal_u == pytest.approx(-0.75)
        assert fit.focal_v == pytest.approx(1.0 - 0.5625)
        assert fit.vertex_check() == pytest.approx(1.0)

    def test_collinear_points(self):
        """Testa pontos colineares: sem campos focais"""
        fit = fit_parabola(PlanePoint(u=0, v=1), PlanePoint(u=1, v=2), PlanePoint(u=2, v=3))
        assert fit.degenerate
        assert fit.vertex_check() is None

    def test_vertex_pair(self):
        """Testa vértices das parábolas v = u² - 1 e v = -u² - 1"""
        fit0 = fit_parabola(PlanePoint(u=-1, v=0), PlanePoint(u=0, v=-1), PlanePoint(u=2, v=3))
        fit1 = fit_parabola(PlanePoint(u=-1, v=-2), PlanePoint(u=0, v=-1), PlanePoint(u=2, v=-5))
        assert check_parabolic_vertices(fit0, fit1) == pytest.approx((-1.0, -1.0))

    def test_vertex_pair_missing_fit(self):
        """Testa par de vértices com um ajuste ausente ou degenerado"""
        fit = fit_parabola(PlanePoint(u=-1, v=0), PlanePoint(u=0, v=-1), PlanePoint(u=2, v=3))
        flat = ParabolaFit(a=0.0, b=1.0, c=0.0)
        v0, v1 = check_parabolic_vertices(fit, None)
        assert v0 == pytest.approx(-1.0)
        assert v1 is None
        assert check_parabolic_vertices(flat, fit)[0] is None

    def test_repeated_abscissa(self):
        """Testa abscissas repetidas"""
        with pytest.raises(DegenerateAbscissaeError):
            fit_parabola(PlanePoint(u=1, v=1), PlanePoint(u=1, v=2), PlanePoint(u=2, v=3))


class TestFocalChecks:
    """Testes das propriedades focais das órbitas K"""

    def test_expected_values(self):
        """Testa as constantes esperadas"""
        assert expected_focal_value(MetricKind.ELLIPTIC, 2.0) == pytest.approx(0.75)
        assert expected_focal_value(MetricKind.PARABOLIC, 1.0) == pytest.approx(-0.75)
        assert expected_focal_value(MetricKind.HYPERBOLIC, 2.0) == pytest.approx(2.5)

    def test_elliptic_circle(self):
        """Testa distância ao centro (y + 1/y)/2 num ponto do círculo"""
        assert check_focal_K(MetricKind.ELLIPTIC, 2.0, PlanePoint(u=0.0, v=0.5)) == pytest.approx(0.75)
        assert check_focal_K(MetricKind.ELLIPTIC, 2.0, PlanePoint(u=0.0, v=2.0)) == pytest.approx(0.75)

    def test_parabolic_vertex_node(self):
        """Testa distância ao foco menos v no vértice (0, 1)"""
        assert check_focal_K(MetricKind.PARABOLIC, 1.0, PlanePoint(u=0.0, v=1.0)) == pytest.approx(-0.75)

    def test_hyperbolic_coincident_foci(self):
        """Testa vval = 1: focos em (0, ±√2) e diferença de módulo 2"""
        value = check_focal_K(MetricKind.HYPERBOLIC, 1.0, PlanePoint(u=0.0, v=1.0))
        assert abs(value) == pytest.approx(2.0)
        assert expected_focal_value(MetricKind.HYPERBOLIC, 1.0) == pytest.approx(2.0)
        far = check_focal_K(MetricKind.HYPERBOLIC, 1.0, PlanePoint(u=math.tan(0.6), v=1 / math.cos(0.6)))
        assert abs(far) == pytest.approx(2.0)

    def test_hyperbolic_unit_orbit(self, orbits_K):
        """Testa o relatório da órbita hiperbólica de (0, 1)"""
        report = next(r for r in orbits_K[MetricKind.HYPERBOLIC].focal_reports if r.vval == 1.0)
        assert report.passed
        assert all(abs(abs(x) - 2.0) < 1e-6 for x in report.values)

    def test_constancy_tolerance(self):
        """Testa desvio absoluto para valores pequenos e relativo para grandes"""
        assert pair_deviation(1.0, 1.0005) == pytest.approx(0.0005)
        assert is_constant_step(100.0, 100.05)
        assert not is_constant_step(1.0, 1.5)

    def test_report_summary(self):
        """Testa o resumo de uma sequência com troca de sinal"""
        report = focal_report(MetricKind.HYPERBOLIC, 6, 2.0, [2.5, 2.5, -2.5])
        assert report.passed
        assert not report.constant
        assert report.constant_magnitude
        assert report.sign_changes == 1

    def test_all_orbits_pass(self, orbits_K, kind):
        """Testa que todas as órbitas K verificam a propriedade focal"""
        reports = orbits_K[kind].focal_reports
        assert len(reports) == DEFAULT_TABLES.vilimit(Subgroup.K, kind) - 1
        assert all(r.passed for r in reports)
        assert all(len(r.values) > 0 for r in reports)

    def test_hyperbolic_magnitude_and_sign(self, orbits_K):
        """Testa |valor| = y + 1/y e a troca de sinal no caso hiperbólico"""
        reports = orbits_K[MetricKind.HYPERBOLIC].focal_reports
        report = next(r for r in reports if r.vval == 2.0)
        assert all(abs(abs(x) - 2.5) < 1e-3 for x in report.values)
        assert any(r.sign_changes for r in reports)

    def test_parabolic_value(self, orbits_K):
        """Testa o valor -0.75 na órbita de (0, 1)"""
        report = next(r for r in orbits_K[MetricKind.PARABOLIC].focal_reports if r.vval == 1.0)
        assert report.values == pytest.approx([-0.75] * len(report.values), abs=1e-6)


class TestParabolicOrbits:
    """Testes das parábolas das órbitas parabólicas"""

    def test_vertices(self, orbits_A_parabolic):
        """Testa vértices em v = ±u² - 1 para as duas imagens de Cayley"""
        for check in orbits_A_parabolic.parabola_checks:
            assert check.vertex_values == pytest.approx([-1.0, -1.0], abs=1e-6)
            assert check.vertex_values == list(check_parabolic_vertices(*check.fits))

    def test_sample_orbit(self, orbits_A_parabolic):
        """Testa a órbita 7: vert=(±1.140, -2.299), l = ±0.25"""
        check = orbits_A_parabolic.parabola_checks[7]
        first, second = check.fits
        assert check.vval == pytest.approx(0.368, abs=1e-3)
        assert first.focal_u == pytest.approx(1.140, abs=1e-3)
        assert first.focal_v == pytest.approx(-2.299, abs=1e-3)
        assert first.focal_l == pytest.approx(0.25)
        assert second.focal_u == pytest.approx(-1.140, abs=1e-3)
        assert second.focal_l == pytest.approx(-0.25)

    def test_render_text(self, orbits_A_parabolic):
        """Testa a saída textual das parábolas"""
        text = render_check_text([orbits_A_parabolic])
        assert "Parab (A/ 7/ 0.368); vert=( 1.140, -2.299); l= 0.2500" in text
        assert "Check vertices:" in text

    def test_N_has_no_vertex_check(self):
        """Testa que N parabólico ajusta parábolas sem verificar vértices"""
        batch = generate_orbits(Subgroup.N, MetricKind.PARABOLIC)
        assert len(batch.parabola_checks) == DEFAULT_TABLES.vilimit(Subgroup.N, MetricKind.PARABOLIC)
        assert all(c.vertex_values is None for c in batch.parabola_checks)


class TestOrbitsAndTransverses:
    """Testes das órbitas e transversais"""

    def test_orbit_layout(self, orbits_K):
        """Testa uma curva por órbita em cada variante"""
        batch = orbits_K[MetricKind.ELLIPTIC]
        for variant in (MoebiusVariant.DIRECT, MoebiusVariant.CAYLEY_POINT, MoebiusVariant.CAYLEY1_POINT):
            curves = batch.curves[variant]
            assert [c.curve_id for c in curves] == list(range(10))
            assert curves[5].color_grade == pytest.approx(0.6)

    def test_same_nodes(self, orbits_K):
        """Testa que transversais passam pelos mesmos pontos das órbitas"""
        transverses = generate_transverses(Subgroup.K, MetricKind.ELLIPTIC)
        orbit_points = Counter((round(p.u, 9), round(p.v, 9))
                               for c in orbits_K[MetricKind.ELLIPTIC].curves[MoebiusVariant.DIRECT]
                               for p in c.points())
        transverse_points = Counter((round(p.u, 9), round(p.v, 9))
                                    for c in transverses.curves[MoebiusVariant.DIRECT]
                                    for p in c.points())
        assert orbit_points == transverse_points

    def test_transverse_ids(self):
        """Testa curve_id = j + passos e tom 1.2"""
        batch = generate_transverses(Subgroup.N, MetricKind.ELLIPTIC)
        curves = batch.curves[MoebiusVariant.DIRECT]
        assert [c.curve_id for c in curves] == list(range(31))
        assert all(c.color_grade == 1.2 for c in curves)

    def test_hyperbolic_breaks(self, orbits_K):
        """Testa que órbitas hiperbólicas que saem do semiplano são quebradas"""
        assert orbits_K[MetricKind.HYPERBOLIC].segment_breaks > 0

    @pytest.mark.parametrize("s", list(Subgroup), ids=lambda s: s.value)
    def test_emitted_points_in_limits(self, s, kind):
        """Testa que todo ponto guardado nas curvas está dentro da área limitada"""
        for batch in (generate_orbits(s, kind), generate_transverses(s, kind)):
            for variant, curves in batch.curves.items():
                cayley = variant != MoebiusVariant.DIRECT
                for curve in curves:
                    assert curve.variant == variant
                    for p in curve.points():
                        assert in_limits(p, kind, cayley, False), (variant.label, p)


class TestArrows:
    """Testes das setas dos campos vetoriais"""

    def test_N_grid(self):
        """Testa grade 20 x 11 com deslocamento (1, 0)"""
        grid = generate_arrows(Subgroup.N, MetricKind.ELLIPTIC)
        assert len(grid.arrows) == 220
        assert grid.singular_points == 0
        assert all(offset == pytest.approx((1.0, 0.0)) for _, offset in grid.arrows)

    def test_K_parabolic(self):
        """Testa dK = (1 + u², 2uv) no caso parabólico"""
        grid = generate_arrows(Subgroup.K, MetricKind.PARABOLIC)
        for base, offset in grid.arrows:
            assert offset == pytest.approx((1 + base.u ** 2, 2 * base.u * base.v), abs=1e-9)

    def test_arrow_curves(self):
        """Testa curvas de dois pontos, marcadas como seta e em cinza 0.6"""
        grid = generate_arrows(Subgroup.A, MetricKind.ELLIPTIC)
        curves = arrow_curves(grid)
        assert len(curves) == len(grid.arrows)
        base, (du, dv) = grid.arrows[30]
        tip = curves[30].points()[1]
        assert (tip.u, tip.v) == pytest.approx((base.u + du, base.v + dv))
        assert all(c.arrow and c.color_grade == 0.6 for c in curves)


class TestFuturePast:
    """Testes dos quadros da transição futuro-passado"""

    def test_frame_count(self, frames):
        """Testa 8 quadros de 15 curvas"""
        assert len(frames) == 8
        assert all(len(curves) == 15 for curves in frames)
        assert [c.color_grade for c in frames[0]] == [0.0] * 8 + [1.0] * 7

    def test_first_frame_is_identity(self, frames):
        """Testa que o quadro 0 reproduz as hipérboles de partida"""
        tables = DEFAULT_TABLES
        for k, curve in enumerate(frames[0]):
            rad = tables.fp_rad[k]
            seeds = [PlanePoint(u=rad * math.cosh(l / 4), v=rad * math.sinh(l / 4)) for l in range(-20, 21)]
            expected = [p for p in seeds if abs(p.u) <= 8.5 and abs(p.v) <= 8.5]
            points = curve.points()
            assert len(points) == len(expected)
            for p, q in zip(points, expected):
                assert (p.u, p.v) == pytest.approx((q.u, q.v), abs=1e-12)

    def test_second_frame_formula(self, frames):
        """Testa o quadro 1 contra a fórmula fechada de [[1, -a e1], [a e1, 1]]"""
        a = math.exp(1 / 1.3 - 3)
        expected = []
        for l in range(-20, 21):
            x, y = math.cosh(l / 4), math.sinh(l / 4)
            alpha, beta = 1 + a * y, a * x
            det = alpha ** 2 - beta ** 2
            u = (alpha * x - beta * (y - a)) / det
            v = (alpha * (y - a) - beta * x) / det
            if abs(u) <= 8.5 and abs(v) <= 8.5:
                expected.append((u, v))
        points = frames[1][7].points()
        assert len(points) == len(expected)
        for p, (u, v) in zip(points, expected):
            assert (p.u, p.v) == pytest.approx((u, v), rel=1e-9, abs=1e-9)

    def test_points_in_limits(self, frames):
        """Testa que os pontos dos quadros ficam no retângulo limitado"""
        for curves in frames:
            for curve in curves:
                for p in curve.points():
                    assert in_limits(p, MetricKind.HYPERBOLIC, False, True)
                    assert abs(p.u) <= 8.5 and abs(p.v) <= 8.5

    def test_custom_tables(self):
        """Testa quadros com tabelas reduzidas"""
        tables = TuningTables(fp_frames=2, fp_curves=3)
        frames = future_past_frames(tables)
        assert len(frames) == 2
        assert all(len(curves) == 3 for curves in frames)


class TestVectorFieldText:
    """Testes da tabela textual dos campos vetoriais"""

    def test_elliptic_rows(self):
        """Testa dA = (2u, 2v), dN = (1, 0), dK = (1 + u² - v², 2uv) em (0.5, 1)"""
        text = render_vector_fields(MetricKind.ELLIPTIC, PlanePoint(u=0.5, v=1.0))
        lines = text.splitlines()
        assert lines[0] == "Vect field (elliptic; u=0.5, v=1)"
        assert lines[1] == "Vect field \t Direct \t\t In Cayley \t\t In Cayley1"
        assert lines[2].startswith("  dA is:\t(1.0000, 2.0000);\t")
        assert lines[3].startswith("  dN is:\t(1.0000, 0.0000);\t")
        assert lines[4].startswith("  dK is:\t(0.2500, 1.0000);\t")

    def test_all_kinds(self, kind):
        """Testa três colunas por subgrupo em cada geometria"""
        lines = render_vector_fields(kind, PlanePoint(u=0.5, v=1.0)).splitlines()
        assert len(lines) == 5
        for s, line in zip(Subgroup, lines[2:]):
            assert line.startswith(f"  d{s.value} is:")
            assert line.count(";") == 2

    def test_parabolic_direct_K(self):
        """Testa dK = (1 + u², 2uv) no caso parabólico"""
        text = render_vector_fields(MetricKind.PARABOLIC, PlanePoint(u=0.5, v=1.0))
        assert "  dK is:\t(1.2500, 1.0000);" in text


class TestEvaluateChecks:
    """Testes da consolidação das verificações"""

    def test_default_run_passes(self, orbits_K, orbits_A_parabolic):
        """Testa que as órbitas padrão não têm falhas"""
        assert evaluate_checks(list(orbits_K.values()) + [orbits_A_parabolic]) == []

    def test_failures_reported(self):
        """Testa falha focal, ausência de troca de sinal e vértice fora do esperado"""
        report = FocalCheckReport(kind=MetricKind.HYPERBOLIC, vi=3, vval=0.5, values=[2.5],
                                  expected=2.5, passed=False)
        batch_K = ScenarioBatch(subgroup=Subgroup.K, kind=MetricKind.HYPERBOLIC, focal_reports=[report])
        check = ParabolaCheck(subgroup=Subgroup.A, vi=2, vval=0.1, vertex_values=[-0.5, -1.0])
        batch_A = ScenarioBatch(subgroup=Subgroup.A, kind=MetricKind.PARABOLIC, parabola_checks=[check])
        failures = evaluate_checks([batch_K, batch_A])
        assert len(failures) == 3
        assert failures[0].startswith("focal K-h vi=3")
        assert "troca de sinal" in failures[1]
        assert failures[2].startswith("vertices A-p vi=2")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
