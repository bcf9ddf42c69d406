import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.cli.config_parser import CONFIG_KEYS, ExperimentConfig, parse_config, render_config
from app.exceptions import ConfigParseError


def test_empty_file_gives_defaults():
    config = parse_config("")
    assert config == ExperimentConfig()
    assert config.m == 128 and config.dims == [10, 15, 20, 25]
    assert config.defaulted_keys() == list(CONFIG_KEYS)


def test_comments_and_blank_lines():
    text = "# sweep\n\nm = 64   # rows\nratios = 2, 4.5\n"
    config = parse_config(text)
    assert config.m == 64
    assert config.ratios == [2.0, 4.5]
    assert "m" not in config.defaulted_keys()


def test_negative_dimension_names_key_and_line():
    with pytest.raises(ConfigParseError) as err:
        parse_config("m = 4\nn = -1\n")
    assert err.value.key == "n"
    assert err.value.line == 2
    assert "'n'" in str(err.value)


def test_unknown_key():
    with pytest.raises(ConfigParseError) as err:
        parse_config("learning_rate = 0.1")
    assert err.value.key == "learning_rate" and err.value.line == 1


def test_unknown_override():
    with pytest.raises(ConfigParseError) as err:
        parse_config("", {"bogus": "1"})
    assert err.value.key == "bogus" and err.value.line is None


def test_negative_sigma_rejected():
    with pytest.raises(ConfigParseError) as err:
        parse_config("sigma = -0.5")
    assert err.value.key == "sigma"


@pytest.mark.parametrize("text", ["T = ten", "schedule_kind = cosine", "dims = 3,x", "N_list = 0,8", "justtext"])
def test_type_and_format_errors(text):
    with pytest.raises(ConfigParseError):
        parse_config(text)


def test_sigma_alone_turns_on_gaussian_noise():
    config = parse_config("", {"sigma": "0.5"})
    assert config.noise_kind == "gaussian"
    assert config.noise_spec().effective_sigma == 0.5
    assert config.sweep_config().noise.effective_sigma == 0.5
    assert parse_config("").noise_spec().effective_sigma == 0.0


def test_sigma_with_noise_switched_off_is_rejected():
    with pytest.raises(ConfigParseError) as err:
        parse_config("noise_kind = none\nsigma = 0.5\n")
    assert err.value.key == "sigma" and err.value.line == 2


def test_gaussian_kind_with_zero_sigma_is_noiseless():
    assert parse_config("noise_kind = gaussian").noise_spec().effective_sigma == 0.0


def test_repeated_key():
    with pytest.raises(ConfigParseError) as err:
        parse_config("m = 1\nm = 2\n")
    assert err.value.line == 2


def test_override_wins():
    assert parse_config("eta0 = 0.5", {"eta0": "2.0"}).eta0 == 2.0


def test_base_sits_below_file():
    config = parse_config("T = 30", {}, base={"T": 2000, "sigma": 1.0})
    assert config.T == 30
    assert config.sigma == 1.0


def test_conversions():
    config = parse_config(
        "noise_kind = gaussian\nsigma = 0.25\nschedule_kind = power_decay\np = 0.75\n"
        "init_kind = bounded_uniform\nc0 = 0.5\nprobe = sampled\nprobe_k = 32\ndims = 4\nratios = 8\n"
    )
    assert config.noise_spec().effective_sigma == 0.25
    assert config.schedule().eta(16) == pytest.approx(16 ** -0.75)
    assert config.init_spec().c0 == 0.5
    assert config.probe_spec().k == 32
    sweep = config.sweep_config()
    assert sweep.cells() == [(4, 8.0, 32)]
    assert sweep.noise.sigma == 0.25


def test_echo_round_trip_of_defaults():
    config = ExperimentConfig()
    assert parse_config(render_config(config)).model_dump() == config.model_dump()


@given(
    st.integers(1, 512),
    st.floats(min_value=1e-6, max_value=1e3, allow_nan=False),
    st.lists(st.integers(1, 100), min_size=1, max_size=5),
    st.lists(st.floats(min_value=0.01, max_value=100, allow_nan=False), min_size=1, max_size=4),
    st.integers(0, 2**64 - 1),
)
def test_echo_round_trip(m, eta0, dims, ratios, seed):
    config = ExperimentConfig(m=m, eta0=eta0, dims=dims, ratios=ratios, master_seed=seed)
    assert parse_config(render_config(config)).model_dump() == config.model_dump()
