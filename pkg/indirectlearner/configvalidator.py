from jsonschema import Draft4Validator, validators


RATIONAL_PATTERN = r"^\s*\d+\s*/\s*(2\s*\^\s*)?\d+\s*$|^\s*\d*\.?\d+\s*$"
RATIONAL_LIST_PATTERN = r"^\s*([^,]+(\s*,\s*[^,]+)*)?\s*$"
INTEGER_LIST_PATTERN = r"^\s*(\d+(\s*,\s*\d+)*)?\s*$"


def _rational(default):
    return {"type": "string", "pattern": RATIONAL_PATTERN, "default": default}


EXPERIMENT_SCHEMA = {
    "type": "object",
    "default": {},
    "additionalProperties": False,
    "properties": {
        "target": {
            "type": "string",
            "minLength": 1,
            "default": "and"
        },
        "arity": {
            "type": "integer",
            "minimum": 1,
            "default": 3
        },
        "distribution": {
            "type": "string",
            "minLength": 1,
            "default": "3/4, 3/4, 3/4"
        },
        "learner": {
            "type": "string",
            "pattern": r"^\s*(brute_force|low_degree\s*\(\s*\d+\s*\))\s*$",
            "default": "brute_force"
        },
        "inverter": {
            "type": "string",
            "enum": ["prod_inv", "identity", "brute_force", "chained"],
            "default": "prod_inv"
        },
        "alpha": _rational("1/16"),
        "beta": _rational("1/8"),
        "gamma": _rational("1/1024"),
        "seed": {
            "type": "integer",
            "minimum": 0,
            "maximum": 18446744073709551615,
            "default": 0
        },
        "trials": {
            "type": "integer",
            "minimum": 0,
            "default": 100
        },
        "workers": {
            "type": "integer",
            "minimum": 1
        },
        "max_arity": {
            "type": "integer",
            "minimum": 1,
            "default": 24
        },
        "max_precision": {
            "type": "integer",
            "minimum": 1,
            "default": 16
        },
        "enumeration_cap": {
            "type": "integer",
            "minimum": 1,
            "default": 24
        },
        "budget_split": _rational("1/2"),
        "default_label": {
            "type": "integer",
            "enum": [0, 1],
            "default": 0
        },
        "allow_budget_violation": {
            "type": "boolean",
            "default": False
        },
        "majority_votes": {
            "type": "integer",
            "minimum": 1,
            "default": 1
        },
        "evaluation_trials": {
            "type": "integer",
            "minimum": 1,
            "default": 10000
        },
        "suite_precisions": {
            "type": "string",
            "pattern": INTEGER_LIST_PATTERN,
            "default": "1, 2, 3, 4"
        },
        "suite_gammas": {
            "type": "string",
            "pattern": RATIONAL_LIST_PATTERN,
            "default": "1/2, 1/4, 1/8"
        },
        "suite_coordinates": {
            "type": "integer",
            "minimum": 0,
            "default": 3
        },
        "suite_product_precision": {
            "type": "integer",
            "minimum": 1,
            "default": 2
        },
        "amplify_function": {
            "type": "string",
            "enum": ["identity", "two_to_one", "random", "product"],
            "default": "two_to_one"
        },
        "amplify_arity": {
            "type": "integer",
            "minimum": 1,
            "default": 4
        },
        "amplify_copies": {
            "type": "integer",
            "minimum": 0,
            "default": 2
        },
        "amplify_hash_length": {
            "type": "integer",
            "minimum": 0,
            "default": 6
        },
        "amplify_repetitions": {
            "type": "integer",
            "minimum": 0,
            "default": 0
        },
        "amplify_attempts": {
            "type": "integer",
            "minimum": 0,
            "default": 0
        },
        "amplify_weak_fraction": _rational("1"),
        "amplify_distance": _rational("3/20"),
        "amplify_trials": {
            "type": "integer",
            "minimum": 1,
            "default": 10000
        }
    }
}


def extend_with_default(validator_class):
    validate_props = validator_class.VALIDATORS["properties"]

    def set_defaults(validator, properties, instance, schema):
        for prop, subschema in properties.items():
            if "default" in subschema:
                instance.setdefault(prop, subschema["default"])

        for err in validate_props(validator, properties, instance, schema):
            yield err

    return validators.extend(
        validator_class, {"properties": set_defaults},
    )


JsonValidator = extend_with_default(Draft4Validator)

experiment_validator = JsonValidator(EXPERIMENT_SCHEMA)


def property_types() -> dict:
    """
    The JSON type of every configuration key.
    """
    return {key: schema["type"]
            for key, schema in EXPERIMENT_SCHEMA["properties"].items()}
