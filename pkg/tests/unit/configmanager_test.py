from fractions import Fraction
import json
import os
import pytest
from indirectlearner.configmanager import (WORKERS_ENVIRONMENT, ConfigManager,
                                           ExperimentConfig, load_config,
                                           parse_key_values)
from indirectlearner.distributions import IdentitySampler, ProductSampler
from indirectlearner.exceptions import (ConfigurationError, SizeError,
                                        ValidationError)
from indirectlearner.inverters import (BruteForceInverter, IdentityInverter,
                                       ProductInverter)
from indirectlearner.learners import BruteForceLearner, LowDegreeLearner


def test_parse_key_values_ignores_comments_and_blank_lines():
    text = """
    # experiment
    target = or
    alpha = 1/8   # error bound
    """
    assert parse_key_values(text) == {"target": "or", "alpha": "1/8"}


def test_parse_key_values_raises_ValidationError_on_a_line_without_equals():
    with pytest.raises(ValidationError):
        parse_key_values("target or")


def test_parse_key_values_raises_ValidationError_on_a_repeated_key():
    with pytest.raises(ValidationError):
        parse_key_values("seed = 1\nseed = 2")


def test_experiment_config_fills_in_defaults():
    config = ExperimentConfig()
    assert config.target == "and"
    assert config.arity == 3
    assert config.alpha == Fraction(1, 16)
    assert config.gamma == Fraction(1, 1024)
    assert config.suite_precisions == [1, 2, 3, 4]
    assert config.suite_gammas == [Fraction(1, 2), Fraction(1, 4),
                                   Fraction(1, 8)]


def test_experiment_config_coerces_strings_from_key_value_files():
    config = ExperimentConfig(arity="2", seed="17",
                              allow_budget_violation="yes")
    assert config.arity == 2
    assert config.seed == 17
    assert config.allow_budget_violation is True


def test_experiment_config_accepts_decimal_numbers_as_rationals():
    assert ExperimentConfig(alpha=0.125).alpha == Fraction(1, 8)


def test_experiment_config_raises_ValidationError_on_an_unknown_key():
    with pytest.raises(ValidationError):
        ExperimentConfig(colour="blue")


def test_experiment_config_raises_ValidationError_on_a_bad_integer():
    with pytest.raises(ValidationError):
        ExperimentConfig(arity="three")


def test_experiment_config_raises_ValidationError_when_alpha_is_not_below_1():
    with pytest.raises(ValidationError):
        ExperimentConfig(alpha="3/2")


def test_experiment_config_raises_ValidationError_on_an_unknown_inverter():
    with pytest.raises(ValidationError):
        ExperimentConfig(inverter="oracle")


def test_workers_prefers_the_config_then_the_environment(monkeypatch):
    monkeypatch.setenv(WORKERS_ENVIRONMENT, "3")
    assert ExperimentConfig().workers == 3
    assert ExperimentConfig(workers=2).workers == 2


def test_workers_ignores_a_nonpositive_environment_value(monkeypatch):
    monkeypatch.setenv(WORKERS_ENVIRONMENT, "0")
    assert ExperimentConfig().workers == (os.cpu_count() or 1)


def test_target_table_of_a_builtin_has_the_configured_arity():
    table = ExperimentConfig(target="parity", arity=4).target_table()
    assert table.arity == 4
    assert table.evaluate_int(0b0111) == 1


def test_target_table_raises_SizeError_past_max_arity():
    with pytest.raises(SizeError):
        ExperimentConfig(arity=6, max_arity=5).target_table()


def test_target_table_reads_a_truth_table_file(tmpdir):
    path = tmpdir.join("target.tt")
    path.write("n=2 out=1\n1\n")
    table = ExperimentConfig(target=str(path), arity=2).target_table()
    assert [table.evaluate_int(u) for u in range(4)] == [0, 0, 0, 1]


def test_sampler_parses_a_product_distribution():
    sampler = ExperimentConfig(distribution="3/4, 5/8").sampler()
    assert isinstance(sampler, ProductSampler)
    assert (sampler.coin_length, sampler.output_length) == (5, 2)


def test_sampler_raises_ValidationError_on_a_non_dyadic_bias():
    with pytest.raises(ValidationError):
        ExperimentConfig(distribution="1/3, 1/2").sampler()


def test_sampler_raises_SizeError_past_max_precision():
    with pytest.raises(SizeError):
        ExperimentConfig(distribution="1/2^20", max_precision=16).sampler()


def test_learner_builds_the_named_learner():
    assert isinstance(ExperimentConfig().learner(), BruteForceLearner)
    learner = ExperimentConfig(learner="low_degree(2)").learner()
    assert isinstance(learner, LowDegreeLearner)
    assert learner.degree == 2


def test_build_inverter_builds_each_named_inverter():
    config = ExperimentConfig(arity=2, distribution="3/4, 1/2")
    sampler = config.sampler()
    assert isinstance(config.build_inverter(sampler), ProductInverter)
    config = ExperimentConfig(inverter="brute_force", arity=2,
                              distribution="3/4, 1/2")
    assert isinstance(config.build_inverter(sampler), BruteForceInverter)
    config = ExperimentConfig(inverter="identity", distribution="identity")
    assert isinstance(config.build_inverter(IdentitySampler(3)),
                      IdentityInverter)


def test_build_inverter_raises_ConfigurationError_for_prod_inv_on_a_table():
    config = ExperimentConfig(distribution="identity")
    with pytest.raises(ConfigurationError):
        config.build_inverter(config.sampler())


def test_add_reads_a_key_value_file(tmpdir):
    path = tmpdir.join("experiment.cfg")
    path.write("target = or\narity = 2\ndistribution = 3/4, 3/4\n")
    manager = ConfigManager()
    manager.add(str(path))
    config = manager.build()
    assert config.target == "or"
    assert config.arity == 2


def test_add_reads_a_json_file(tmpdir):
    path = tmpdir.join("experiment.json")
    path.write(json.dumps({"target": "majority", "trials": 5}))
    manager = ConfigManager()
    manager.add(str(path))
    assert manager.get("target") == "majority"
    assert manager.build().trials == 5


def test_add_raises_IOError_if_the_path_is_not_a_file():
    with pytest.raises(IOError):
        ConfigManager().add(os.path.join(__file__, "nope.cfg"))


def test_add_raises_ValidationError_if_the_file_is_not_a_json(tmpdir):
    path = tmpdir.join("fake.json")
    path.write("{\"target\": \"or\", } }")
    with pytest.raises(ValidationError):
        ConfigManager().add(str(path))


def test_later_sources_override_earlier_ones(tmpdir):
    path = tmpdir.join("experiment.cfg")
    path.write("target = or\nseed = 5\n")
    config = load_config({"target": "and", "trials": 7}, str(path),
                         overrides=["target=parity"], seed=9)
    assert config.target == "parity"
    assert config.trials == 7
    assert config.seed == 9


def test_set_raises_ValidationError_without_an_assignment():
    with pytest.raises(ValidationError):
        ConfigManager().set("target")


def test_asdict_is_sorted_and_includes_defaults():
    values = ExperimentConfig(target="or").asdict()
    assert list(values) == sorted(values)
    assert values["target"] == "or"
    assert values["inverter"] == "prod_inv"
