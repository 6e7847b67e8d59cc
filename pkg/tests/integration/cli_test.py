import io
import json
import logging
import pytest
from helpers.brokeninverter import BoundaryBitInverter
from indirectlearner.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, main,
                                 run_command)
from indirectlearner.experimentrunner import ExperimentRunner


EXPERIMENT = """
# AND2 over (3/4, 3/4)
target = and
arity = 2
distribution = 3/4, 3/4
learner = brute_force
gamma = 1/2^8
alpha = 1/8
beta = 1/8
trials = 4
"""

SMALL_SUITE = ["--set", "suite_precisions=1, 2", "--set",
               "suite_gammas=1/2, 1/4", "--set", "suite_coordinates=2"]


@pytest.fixture
def experiment(tmpdir):
    path = tmpdir.join("experiment.cfg")
    path.write(EXPERIMENT)
    return str(path)


def test_learn_writes_a_json_report_and_exits_0(experiment, tmpdir):
    out = tmpdir.join("report.json")
    code = run_command(["learn", "--config", experiment, "--seed", "1",
                        "--out", str(out)])
    report = json.loads(out.read())
    assert code == EXIT_OK
    assert report["kind"] == "learn"
    assert report["passed"]
    assert report["config"]["seed"] == 1
    assert "timing" not in report


def test_learn_reruns_are_byte_identical(experiment, tmpdir):
    paths = [tmpdir.join("first.json"), tmpdir.join("second.json")]
    for path in paths:
        run_command(["learn", "--config", experiment, "--seed", "7",
                     "--out", str(path)])
    assert paths[0].read() == paths[1].read()


def test_invert_suite_reruns_are_byte_identical():
    outputs = []
    for _ in range(2):
        stdout = io.StringIO()
        run_command(["invert-suite"] + SMALL_SUITE, stdout=stdout)
        outputs.append(stdout.getvalue())
    assert outputs[0] == outputs[1]


def test_amplify_reruns_are_byte_identical_in_csv():
    argv = ["amplify", "--seed", "3", "--format", "csv",
            "--set", "amplify_arity=3", "--set", "amplify_hash_length=4",
            "--set", "amplify_repetitions=3", "--set", "amplify_trials=300"]
    outputs = []
    for _ in range(2):
        stdout = io.StringIO()
        assert run_command(argv, stdout=stdout) == EXIT_OK
        outputs.append(stdout.getvalue())
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith("key,value\n")


def test_timing_adds_the_wall_time(experiment):
    stdout = io.StringIO()
    run_command(["learn", "--config", experiment, "--timing"], stdout=stdout)
    assert "seconds" in json.loads(stdout.getvalue())["timing"]


def test_an_unknown_key_exits_2_naming_the_key(experiment, caplog):
    code = run_command(["learn", "--config", experiment,
                        "--set", "colour=blue"], stdout=io.StringIO())
    assert code == EXIT_CONFIG
    assert "colour" in caplog.text


def test_a_missing_config_file_exits_2(tmpdir):
    code = run_command(["learn", "--config", str(tmpdir.join("nope.cfg"))],
                       stdout=io.StringIO())
    assert code == EXIT_CONFIG


def test_an_oversized_amplify_arity_exits_2(caplog):
    code = run_command(["amplify", "--set", "amplify_arity=40"],
                       stdout=io.StringIO())
    assert code == EXIT_CONFIG
    assert "SizeError" in caplog.text


def test_a_broken_bit_inverter_exits_3():
    def runner(config):
        return ExperimentRunner(config, bit_inverter=BoundaryBitInverter)

    stdout = io.StringIO()
    code = run_command(["invert-suite"] + SMALL_SUITE, runner=runner,
                       stdout=stdout)
    assert code == EXIT_VIOLATION
    assert json.loads(stdout.getvalue())["violations"]


def test_main_exits_with_the_command_status(capsys):
    with pytest.raises(SystemExit) as e:
        main(["invert-suite", "--set", "suite_precisions=1",
              "--set", "suite_coordinates=1"])
    assert e.value.code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"]


def test_verbose_turns_on_debug_logging(experiment):
    root = logging.getLogger()
    level = root.level
    try:
        run_command(["learn", "--config", experiment, "-v"],
                    stdout=io.StringIO())
        assert root.level == logging.DEBUG
    finally:
        root.setLevel(level)
