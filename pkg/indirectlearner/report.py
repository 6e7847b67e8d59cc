from typing import List, Optional
import csv
import io
import json
import logging


logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


def _flatten(value, prefix: str = "") -> List[tuple]:
    if isinstance(value, dict):
        rows = []
        for key in sorted(value):
            name = "{}.{}".format(prefix, key) if prefix else str(key)
            rows.extend(_flatten(value[key], name))
        return rows
    if isinstance(value, list):
        if all(not isinstance(item, (dict, list)) for item in value):
            return [(prefix, " ".join(str(item) for item in value))]
        rows = []
        for index, item in enumerate(value):
            rows.extend(_flatten(item, "{}.{}".format(prefix, index)))
        return rows
    return [(prefix, value)]


class RunReport:
    """
    The outcome of one harness run.

    Everything but the optional timing is a function of the configuration
    and seed, so two runs with the same inputs serialize identically.
    """

    def __init__(self, kind: str, config: dict, results: dict = None,
                 violations: List[str] = None):
        self.kind = kind
        self.config = dict(config)
        self.results = results or {}
        self.violations = list(violations or [])
        self.elapsed: Optional[float] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def violate(self, message: str):
        logger.warning("Bound violated: {}".format(message))
        self.violations.append(message)

    def asdict(self, timing: bool = False) -> dict:
        body = {
            "kind": self.kind,
            "config": self.config,
            "results": self.results,
            "violations": self.violations,
            "passed": self.passed,
        }
        if timing and self.elapsed is not None:
            body["timing"] = {"seconds": round(self.elapsed, 3)}
        return body

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.asdict(timing), indent=2, sort_keys=True) + "\n"

    def to_csv(self, timing: bool = False) -> str:
        """
        A two column key,value summary with nested keys joined by dots.
        """
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in _flatten(self.asdict(timing)):
            writer.writerow([key, value])
        return output.getvalue()

    def render(self, format: str = "json", timing: bool = False) -> str:
        if format not in FORMATS:
            raise ValueError("unknown report format '{}'".format(format))
        return self.to_json(timing) if format == "json" \
            else self.to_csv(timing)

    def write(self, path: str, format: str = "json", timing: bool = False):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.render(format, timing))
        logger.debug("Wrote {} report to {}".format(format, path))

    def __str__(self):
        return "RunReport({}, passed={})".format(self.kind, self.passed)
