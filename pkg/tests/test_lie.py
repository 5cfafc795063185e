"""
Tests for L-infinity structures, their validation and the bundled fixtures.
"""

from fractions import Fraction

import pytest

from dmc_checker.errors import AxiomError, SpecFormatError
from dmc_checker.lie import (koszul_from_polynomial, list_fixtures, load_structure,
                             parse_structure, relation_failures, validate)


def spec(generators, brackets, **extra):
    data = {"name": "test",
            "generators": [{"name": n, "degree": d} for n, d in generators],
            "brackets": [{"args": list(args),
                          "value": [{"gen": g, "coef": c} for g, c in value.items()]}
                         for args, value in brackets]}
    data.update(extra)
    return data


class TestParsing:
    """Test the JSON schema."""

    def test_fixture_list(self):
        assert list_fixtures() == ["abelian2", "harrison-d2", "heis", "koszul-x2", "odd-square"]

    def test_load_fixture(self, odd_square):
        assert odd_square.names() == ["x", "y"]
        assert odd_square.bracket(("x", "x")) == {"y": Fraction(1)}
        assert odd_square.is_dgla()
        assert not odd_square.is_abelian()

    def test_unknown_fixture(self):
        with pytest.raises(SpecFormatError):
            load_structure("fixture:nope")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(SpecFormatError):
            load_structure(path)

    def test_degree_mismatch_names_the_bracket(self):
        data = spec([("x", 1), ("y", 2)], [(("x", "x"), {"x": "1"})])
        with pytest.raises(AxiomError) as excinfo:
            parse_structure(data)
        assert "[x, x]" in excinfo.value.witness

    def test_float_coefficient_rejected(self):
        data = spec([("x", 1), ("y", 2)], [(("x",), {"y": "0.5"})])
        with pytest.raises(SpecFormatError):
            parse_structure(data)

    def test_bracket_above_max_arity(self):
        data = spec([("x", 1), ("y", 2)], [(("x", "x"), {"y": "1"})], max_arity=1)
        with pytest.raises(SpecFormatError):
            parse_structure(data)

    def test_reordered_arguments_stored_canonically(self):
        data = spec([("x1", 1), ("x2", 1), ("y", 2)], [(("x2", "x1"), {"y": "1"})])
        L = parse_structure(data)
        assert L.bracket(("x1", "x2")) == {"y": Fraction(1)}

    def test_json_round_trip(self, heis):
        again = parse_structure(heis.to_json())
        assert again.brackets == heis.brackets
        assert again.basis == heis.basis


class TestAntisymmetry:
    """Test graded antisymmetry of stored brackets."""

    def test_odd_elements_commute(self, heis):
        assert heis.bracket(("x2", "x1")) == heis.bracket(("x1", "x2"))

    def test_even_elements_anticommute(self):
        L = parse_structure(spec([("x", 1), ("a", 2), ("b", 2), ("c", 4)],
                                 [(("a", "b"), {"c": "1"})]))
        assert L.bracket(("b", "a")) == {"c": Fraction(-1)}
        assert L.bracket(("a", "a")) == {}


class TestValidation:
    """Test the L-infinity relations."""

    @pytest.mark.parametrize("name", ["abelian2", "odd-square", "heis", "koszul-x2",
                                      "harrison-d2"])
    def test_fixtures_validate(self, name):
        L = validate(f"fixture:{name}")
        assert relation_failures(L) == []

    def test_differential_must_square_to_zero(self):
        data = spec([("x", 1), ("y", 2), ("z", 3)],
                    [(("x",), {"y": "1"}), (("y",), {"z": "1"})])
        with pytest.raises(AxiomError):
            validate(data)

    def test_jacobi_failure(self):
        data = spec([("x", 1), ("y", 2), ("z", 3)],
                    [(("x", "x"), {"y": "1"}), (("x", "y"), {"z": "1"})])
        with pytest.raises(AxiomError) as excinfo:
            validate(data)
        assert "x" in excinfo.value.witness

    def test_koszul_recipe(self):
        L = load_structure("fixture:koszul-x2")
        assert L.bracket(("x", "x")) == {"y": Fraction(2)}

    def test_koszul_from_polynomial_directly(self):
        L = koszul_from_polynomial(["x", "z"], ["y"], {"y": {(("z", 1), ("x", 1)): Fraction(3)}})
        assert L.bracket(("x", "z")) == {"y": Fraction(3)}
        validate(L)

    def test_koszul_unknown_source_coordinate(self):
        with pytest.raises(SpecFormatError, match="unknown source coordinate 'w'"):
            koszul_from_polynomial(["x"], ["y"], {"y": {(("x", 1), ("w", 1)): Fraction(1)}})

    def test_harrison_positive_truncation(self):
        L = load_structure("fixture:harrison-d2")
        assert not L.is_positive()
        positive = L.truncate_positive()
        assert positive.is_positive()
        assert positive.degrees() == [1, 2]
        validate(positive)

    def test_underlying_complex_strips_brackets(self, heis):
        natural = heis.underlying_complex()
        assert natural.is_abelian()
        assert natural.basis == heis.basis
