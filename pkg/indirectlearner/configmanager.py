from fractions import Fraction
from typing import Dict, List, Optional, Union
import json
import logging
import os
import jsonschema
import requests
from .exceptions import (ConfigurationError, RequestError, SizeError,
                         ValidationError)
from .bitcore import TruthTable, builtin_function
from .bitcore.builtins import BOOLEAN_FUNCTIONS
from .configvalidator import experiment_validator, property_types
from .distributions import (IdentitySampler, ProductDistribution, Sampler,
                            TableSampler)
from .inverters import (BruteForceInverter, DistributionalInverter,
                        IdentityInverter, ProductInverter)
from .learners import UniformLearner, parse_learner
from .utils import parse_rational


logger = logging.getLogger(__name__)

WORKERS_ENVIRONMENT = "INDIRECTLEARN_WORKERS"

RATIONAL_KEYS = ("alpha", "beta", "gamma", "budget_split",
                 "amplify_weak_fraction", "amplify_distance")


def parse_key_values(text: str) -> Dict[str, str]:
    """
    Parse the flat "key = value" format. Blank lines and everything after a
    '#' are ignored.

    Raises:
        ValidationError - A line has no '=' or repeats a key.
    """
    values = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError("line {}: expected 'key = value', got {!r}"
                                  .format(number, line))
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ValidationError("line {}: duplicate key '{}'"
                                  .format(number, key))
        values[key] = value
    return values


def _coerce(key: str, value, kind: Optional[str]):
    if not isinstance(value, str):
        if kind == "string" and isinstance(value, (int, float)) \
                and not isinstance(value, bool):
            return str(value)
        return value
    try:
        if kind == "integer":
            return int(value.strip())
        if kind == "boolean":
            lowered = value.strip().lower()
            if lowered in ("true", "yes", "on", "1"):
                return True
            if lowered in ("false", "no", "off", "0"):
                return False
            raise ValueError("not a boolean: {!r}".format(value))
    except ValueError as e:
        raise ValidationError("{}: {}".format(key, e)) from e
    return value


def coerce_values(values: dict) -> dict:
    """
    Convert string values to the types the schema expects.
    """
    types = property_types()
    return {key: _coerce(key, value, types.get(key))
            for key, value in values.items()}


def _parse_list(text: str, parse) -> list:
    return [parse(item.strip()) for item in text.split(",") if item.strip()]


class ExperimentConfig:
    """
    A validated experiment configuration with its values parsed.
    """

    def __init__(self, validate=True, **kwargs):
        values = coerce_values(kwargs)
        if validate:
            self._validate(values)
        self.values = values
        for key in RATIONAL_KEYS:
            if key in values:
                self._rational(key)
        for key in ("alpha", "beta", "gamma", "budget_split"):
            value = self._rational(key)
            if not 0 < value < 1:
                raise ValidationError("{}: {} is not inside (0, 1)"
                                      .format(key, value))

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    def _validate(self, data: dict):
        try:
            experiment_validator.validate(data)
        except jsonschema.ValidationError as e:
            field = ".".join(str(part) for part in e.path) or "config"
            raise ValidationError("{}: {}".format(field, e.message)) from e

    def _rational(self, key: str) -> Fraction:
        try:
            return parse_rational(self.values[key])
        except ValueError as e:
            raise ValidationError("{}: {}".format(key, e)) from e

    @property
    def alpha(self) -> Fraction:
        return self._rational("alpha")

    @property
    def beta(self) -> Fraction:
        return self._rational("beta")

    @property
    def gamma(self) -> Fraction:
        return self._rational("gamma")

    @property
    def budget_split(self) -> Fraction:
        return self._rational("budget_split")

    @property
    def amplify_weak_fraction(self) -> Fraction:
        value = self._rational("amplify_weak_fraction")
        if value > 1:
            raise ValidationError("amplify_weak_fraction: {} exceeds 1"
                                  .format(value))
        return value

    @property
    def amplify_distance(self) -> Fraction:
        value = self._rational("amplify_distance")
        if not 0 < value <= 1:
            raise ValidationError("amplify_distance: {} is not inside (0, 1]"
                                  .format(value))
        return value

    @property
    def workers(self) -> int:
        if "workers" in self.values:
            return self.values["workers"]
        env = os.environ.get(WORKERS_ENVIRONMENT)
        if env:
            try:
                workers = int(env)
            except ValueError as e:
                raise ValidationError("{}: {}"
                                      .format(WORKERS_ENVIRONMENT, e)) from e
            if workers >= 1:
                return workers
            logger.warning("Ignoring {} = {}".format(WORKERS_ENVIRONMENT, env))
        return os.cpu_count() or 1

    @property
    def suite_precisions(self) -> List[int]:
        return _parse_list(self.values["suite_precisions"], int)

    @property
    def suite_gammas(self) -> List[Fraction]:
        try:
            gammas = _parse_list(self.values["suite_gammas"], parse_rational)
        except ValueError as e:
            raise ValidationError("suite_gammas: {}".format(e)) from e
        for gamma in gammas:
            if not 0 < gamma < 1:
                raise ValidationError("suite_gammas: {} is not inside (0, 1)"
                                      .format(gamma))
        return gammas

    def target_table(self) -> TruthTable:
        """
        The target named by a builtin, or read from a truth table file or
        URL.

        Raises:
            ValidationError - The target cannot be parsed.
            SizeError - The target exceeds max_arity.
        """
        target = self.values["target"].strip()
        if target.lower() in BOOLEAN_FUNCTIONS:
            if self.arity > self.max_arity:
                raise SizeError("target arity {} exceeds the enumeration cap "
                                "of {} bits"
                                .format(self.arity, self.max_arity))
            return builtin_function(target, self.arity)
        table = TruthTable.parse(_read_text(target),
                                 max_arity=self.max_arity)
        if table.out_len != 1:
            raise ValidationError("target: {} is not Boolean".format(target))
        return table

    def sampler(self) -> Sampler:
        text = self.values["distribution"].strip()
        if text.lower() == "identity":
            return IdentitySampler(self.arity)
        if text.lower().startswith("table:"):
            table = TruthTable.parse(_read_text(text[len("table:"):].strip()),
                                     max_arity=self.enumeration_cap)
            return TableSampler(table)
        try:
            return ProductDistribution.parse(
                text, max_precision=self.max_precision).sampler()
        except ValidationError as e:
            raise ValidationError("distribution: {}".format(e)) from e

    def learner(self) -> UniformLearner:
        return parse_learner(self.values["learner"], cap=self.max_arity)

    def build_inverter(self, sampler: Sampler) -> DistributionalInverter:
        """
        The inverter named by the config, for the given sampler. The
        chained inverter is built by the experiment runner.
        """
        kind = self.values["inverter"]
        if kind == "prod_inv":
            if not hasattr(sampler, "distribution"):
                raise ConfigurationError("prod_inv needs a product "
                                         "distribution")
            return ProductInverter(sampler.distribution, self.gamma)
        if kind == "identity":
            if sampler.coin_length != sampler.output_length:
                raise ConfigurationError("the identity inverter needs a "
                                         "sampler on as many coins as bits")
            return IdentityInverter(sampler.output_length)
        if kind == "brute_force":
            return BruteForceInverter(sampler, cap=self.enumeration_cap)
        raise ConfigurationError("inverter '{}' is built by the runner"
                                 .format(kind))

    def asdict(self) -> dict:
        return dict(sorted(self.values.items()))


def _read_text(source: str) -> str:
    if source.startswith("http"):
        try:
            response = requests.get(source)
            response.raise_for_status()
            return response.text
        except requests.RequestException as e:
            raise RequestError(e) from e
    with open(source, 'r', encoding='utf-8') as f:
        return f.read()


class ConfigManager:
    """
    Collects configuration values from dicts, files and urls, later
    sources overriding earlier ones, and builds an ExperimentConfig.
    """

    def __init__(self):
        self.values = {}

    def add(self, config: Union[str, dict]):
        """
        Add configuration values from dict/file/url.

        Files and urls hold either a JSON object or "key = value" lines.

        Raises:
            ValidationError - The resource is incorrect.
            RequestError - The resource could not be retrieve from url.
            IOError - The file could not be read.
        """
        if isinstance(config, dict):
            logger.debug("Adding config from dictionary")
            self._add_from_dict(config)
        elif config.startswith("http"):
            logger.debug("Adding config from url: {}".format(config))
            self._add_from_url(config)
        else:
            logger.debug("Adding config from file: {}".format(config))
            self._add_from_file(config)

    def set(self, assignment: str):
        """
        Apply a "key=value" override.
        """
        if "=" not in assignment:
            raise ValidationError("expected key=value, got {!r}"
                                  .format(assignment))
        key, value = (part.strip() for part in assignment.split("=", 1))
        self.values[key] = value

    def get(self, key: str):
        return self.values.get(key, None)

    def build(self, validate=True) -> ExperimentConfig:
        return ExperimentConfig(validate=validate, **self.values)

    def _add_from_dict(self, config: dict):
        self.values.update(config)

    def _add_from_text(self, text: str):
        if text.lstrip().startswith("{"):
            try:
                config = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValidationError(e) from e
            if not isinstance(config, dict):
                raise ValidationError("a JSON config must be an object")
        else:
            config = parse_key_values(text)
        self._add_from_dict(config)

    def _add_from_file(self, path: str):
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
        self._add_from_text(text)

    def _add_from_url(self, url: str):
        try:
            response = requests.get(url)
            response.raise_for_status()
            text = response.text
        except requests.RequestException as e:
            raise RequestError(e) from e

        self._add_from_text(text)


def load_config(*sources: Union[str, dict], overrides: List[str] = (),
                seed: int = None) -> ExperimentConfig:
    """
    Merge sources in order, apply key=value overrides and the seed, and
    validate.
    """
    manager = ConfigManager()
    for source in sources:
        manager.add(source)
    for assignment in overrides:
        manager.set(assignment)
    if seed is not None:
        manager.values["seed"] = seed
    return manager.build()
