import textwrap

import pytest

from curvebody.config import load_config, parse_config
from curvebody.dynamics import PotentialSpec
from curvebody.errors import ParseError, UnknownKey, ValidationError
from curvebody.ring import SpaceSign

BASE = textwrap.dedent("""\
    space = "hyperbolic"
    m1 = 1.0
    m2 = 2.0
    q1 = [0.1, 0.0, 0.0]
    q2 = [-0.2, 0.0, 0.0]
    dt = 0.001
    steps = 100
""")


def test_minimal_config_defaults():
    cfg = parse_config(BASE)
    assert cfg.sign is SpaceSign.HYPERBOLIC
    assert cfg.q1dot == (0.0, 0.0, 0.0) and cfg.output_every == 1 and cfg.seed == 0
    assert cfg.potential == PotentialSpec()
    st = cfg.initial_state()
    assert st.v2[0] == -0.2 and st.sign is SpaceSign.HYPERBOLIC


def test_potential_forms():
    a = parse_config(BASE + 'potential = "coulomb"\nalpha = 0.5\n').potential
    b = parse_config(BASE + 'potential = { kind = "coulomb", alpha = 0.5 }\n').potential
    assert a == b == PotentialSpec("coulomb", 0.5)
    c = parse_config(BASE + 'potential = "oscillator"\nomega = 2\n').potential
    assert c == PotentialSpec("oscillator", 0.0, 2.0)


def test_integers_accepted_as_reals():
    cfg = parse_config(BASE.replace("m1 = 1.0", "m1 = 3"))
    assert cfg.m1 == 3.0 and isinstance(cfg.m1, float)


def test_load_from_file(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text(BASE)
    assert load_config(p).steps == 100
    with pytest.raises(ParseError):
        load_config(tmp_path / "missing.toml")


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_config(BASE + "dt = = 3\n")
    assert info.value.line == 8
    assert str(info.value).startswith("line 8:")


@pytest.mark.parametrize("text,key", [
    (BASE + "color = 1\n", "color"),
    (BASE + 'potential = { kind = "free", beta = 1 }\n', "potential.beta"),
])
def test_unknown_keys(text, key):
    with pytest.raises(UnknownKey) as info:
        parse_config(text)
    assert info.value.key == key


@pytest.mark.parametrize("old,new,key", [
    ('space = "hyperbolic"', 'space = "torus"', "space"),
    ("m1 = 1.0", "m1 = 0.0", "m1"),
    ("m2 = 2.0", "m2 = true", "m2"),
    ("q1 = [0.1, 0.0, 0.0]", "q1 = [0.1, 0.0]", "q1"),
    ("q1 = [0.1, 0.0, 0.0]", "q1 = [1.5, 0.0, 0.0]", "q1"),
    ("q2 = [-0.2, 0.0, 0.0]", 'q2 = [0.0, "a", 0.0]', "q2"),
    ("dt = 0.001", "dt = -0.1", "dt"),
    ("dt = 0.001", "dt = nan", "dt"),
    ("steps = 100", "steps = 1.5", "steps"),
    ("steps = 100", "steps = 0", "steps"),
])
def test_invalid_values(old, new, key):
    with pytest.raises(ValidationError) as info:
        parse_config(BASE.replace(old, new))
    assert info.value.key == key


def test_missing_required_key():
    with pytest.raises(ValidationError) as info:
        parse_config(BASE.replace("steps = 100\n", ""))
    assert info.value.key == "steps"


def test_bad_potential_kind_and_duplicate_parameter():
    with pytest.raises(ValidationError):
        parse_config(BASE + 'potential = "yukawa"\n')
    with pytest.raises(ValidationError):
        parse_config(BASE + 'alpha = 1\npotential = { kind = "coulomb", alpha = 0.5 }\n')


def test_sphere_accepts_large_chart_vectors():
    cfg = parse_config(BASE.replace('"hyperbolic"', '"sphere"').replace("[0.1, 0.0, 0.0]", "[5.0, 0.0, 0.0]"))
    assert cfg.q1 == (5.0, 0.0, 0.0)
