import pytest

from pairaug.config import (
    ConfigError,
    RunConfig,
    parse_config,
    serialize_config,
    with_overrides,
)

SAMPLE = """
# super-resolution run
task = sr
scale = 4
patch_size = 48
policy = realsr
seed = 42
samples_per_image = 25
workers = 4
input_dir = data/sr4
output_dir = runs/realsr
weights.cutblur = 4.0
alpha.cutmix = 0.65
alpha.cutmixup = 0.7,1.2
"""


def test_parse_basic():
    cfg = parse_config(SAMPLE)
    assert cfg.task == "sr"
    assert cfg.scale == 4
    assert cfg.policy == "realsr"
    assert cfg.weights == {"cutblur": 4.0}
    assert cfg.alphas == {"cutmix": 0.65, "cutmixup": (0.7, 1.2)}


def test_round_trip_is_identity():
    cfg = parse_config(SAMPLE)
    assert parse_config(serialize_config(cfg)) == cfg


def test_round_trip_defaults():
    cfg = RunConfig(input_dir="a", output_dir="b")
    assert parse_config(serialize_config(cfg)) == cfg


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        parse_config("frobnicate = 1\n")


def test_unknown_method_rejected():
    with pytest.raises(ConfigError):
        parse_config("weights.sharpen = 2\n")


def test_malformed_line_rejected():
    with pytest.raises(ConfigError):
        parse_config("task sr\n")


def test_policy_resolution_with_overrides():
    cfg = parse_config("policy = default\np = 0.5\nweights.cutblur = 10\n")
    policy = cfg.moa_policy()
    assert policy.p == 0.5
    weights = {e.method: e.weight for e in policy.entries}
    assert weights["cutblur"] == 10.0
    assert weights["mixup"] == 1.0


def test_preset_untouched_without_overrides():
    cfg = RunConfig(policy="realsr")
    policy = cfg.moa_policy()
    assert {e.method: e.weight for e in policy.entries}["cutblur"] == 4.0


def test_validation_errors():
    with pytest.raises(ConfigError):
        RunConfig(patch_size=0).validate()
    with pytest.raises(ConfigError):
        RunConfig(samples_per_image=0).validate()
    with pytest.raises(ConfigError):
        RunConfig(workers=0).validate()


def test_with_overrides_skips_none():
    cfg = RunConfig(seed=5)
    assert with_overrides(cfg, seed=None).seed == 5
    assert with_overrides(cfg, seed=9).seed == 9
