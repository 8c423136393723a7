"""Declarative surface files: parsing, validation, error positions."""

import math

import pytest

from cavityheat import (
    QuadratureSpec,
    SurfaceFileError,
    enclosed_volume,
    loads_surface,
    surface_integral,
)
from cavityheat.geometry.curvature import curvature_grid

ELLIPSOID = """\
schema 1
name stretched
components 1
genera 0

param a 1.0
param b 1.3

chart
  domain u 0 pi
  domain v 0 2*pi
  periodic v
  x a*sin(u)*cos(v)      # comment after an expression
  y b*sin(u)*sin(v)
  z 1.7*cos(u)
  normal outward
end
"""

TORUS = """\
schema 1
name ring
components 1
genera 1
param R 2.0
param r 0.5
chart
  domain u 0 2*pi
  domain v 0 2*pi
  periodic u
  periodic v
  x (R + r*cos(u))*cos(v)
  y (R + r*cos(u))*sin(v)
  z r*sin(u)
  normal inward
end
"""


class TestParsing:
    def test_ellipsoid_volume_and_curvature(self):
        model = loads_surface(ELLIPSOID)
        q = QuadratureSpec(order=24)
        assert enclosed_volume(model, q).value == pytest.approx(
            4 * math.pi * 1.0 * 1.3 * 1.7 / 3, rel=1e-10)
        total = surface_integral(
            model, lambda ch, U, V: curvature_grid(ch, U, V)["detL"], q)
        assert total.value == pytest.approx(4 * math.pi, abs=1e-9)

    def test_torus_genus_declared(self):
        model = loads_surface(TORUS)
        assert model.topology.genera == (1,)
        q = QuadratureSpec(order=16)
        assert enclosed_volume(model, q).value == pytest.approx(
            2 * math.pi**2 * 2.0 * 0.25, rel=1e-10)

    def test_power_operator_both_spellings(self):
        both = """\
schema 1
components 1
genera 0
chart
  domain u 0 pi
  domain v 0 2*pi
  periodic v
  x sin(u)^2*cos(v) + sin(u)*cos(v)*(1 - sin(u))
  y sin(u)**2*sin(v) + sin(u)*sin(v)*(1 - sin(u))
  z cos(u)
  normal outward
end
"""
        model = loads_surface(both)
        # both spellings reduce to the round sphere
        q = QuadratureSpec(order=16)
        assert enclosed_volume(model, q).value == pytest.approx(
            4 * math.pi / 3, rel=1e-10)


class TestErrors:
    def err(self, text):
        with pytest.raises(SurfaceFileError) as e:
            loads_surface(text)
        return e.value

    def test_unknown_name_position(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 pi\n  domain v 0 2*pi\n"
                "  x sin(q)\n  y u\n  z v\nend")
        err = self.err(text)
        assert err.line == 7
        assert "unknown name 'q'" in str(err)

    def test_unknown_function(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 pi\n  domain v 0 2*pi\n"
                "  x tan(u)\n  y u\n  z v\nend")
        assert "unknown function 'tan'" in str(self.err(text))

    def test_syntax_error_reports_column(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 pi\n  domain v 0 2*pi\n"
                "  x u*\n  y u\n  z v\nend")
        err = self.err(text)
        assert err.line == 7
        assert err.column >= 5

    def test_missing_schema(self):
        assert "schema" in str(self.err("components 1\ngenera 0\n"))

    def test_unclosed_chart(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 1\n  domain v 0 1\n  x u\n  y v\n  z u")
        assert "not closed" in str(self.err(text))

    def test_missing_component_fields(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 1\n  domain v 0 1\n  x u\n  y v\nend")
        assert "missing 'z'" in str(self.err(text))

    def test_genus_count_mismatch(self):
        text = ("schema 1\ncomponents 2\ngenera 0\nchart\n"
                "  domain u 0 1\n  domain v 0 1\n  x u\n  y v\n  z u+v\nend")
        with pytest.raises(ValueError, match="genera"):
            loads_surface(text)

    def test_reversed_domain(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 1 0\n  domain v 0 1\n  x u\n  y v\n  z u\nend")
        assert "lower bound" in str(self.err(text))

    def test_calls_with_attributes_rejected(self):
        text = ("schema 1\ncomponents 1\ngenera 0\nchart\n"
                "  domain u 0 1\n  domain v 0 1\n"
                "  x os.getcwd()\n  y v\n  z u\nend")
        assert "plain function calls" in str(self.err(text))


def test_load_from_path(tmp_path):
    p = tmp_path / "shape.surf"
    p.write_text(ELLIPSOID)
    from cavityheat import load_surface

    model = load_surface(p)
    # the in-file 'name' directive wins over the filename-derived default
    assert model.name == "stretched"
