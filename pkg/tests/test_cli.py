import json

import pytest

from braidcalc.cli import main, parse_scalar, parse_spec, run
from braidcalc.errors import ParseError, ValidationError
from braidcalc.scalars import field_make

F4 = field_make(4)
F8 = field_make(8)


GUREVICH_JOB = """
# enveloping-algebra fixture
[field]
m = 1

[space]
kind = preset
name = gurevich

[bracket]
preset = gurevich

[tasks]
bracket
lie_check = 4, 2
pbw = 4, 2
pl_verify = 2
"""

TWODIM_JOB = """
[field]
m = 2

[space]
kind = diagonal
q = [[-1, 1], [-1, -1]]

[tasks]
sdeg = 6
nichols = 5
"""


def test_parse_scalar_expressions():
    assert parse_scalar(F4, "3") == F4.from_rational(3)
    assert parse_scalar(F4, "1/2") == F4.from_fraction(1, 2)
    assert parse_scalar(F4, "z") == F4.gen
    assert parse_scalar(F4, "-z^2") == F4.from_rational(1)  # z^2 = -1
    assert parse_scalar(F4, "2*z") == F4.gen + F4.gen
    assert parse_scalar(F4, "1 + z") == F4.one + F4.gen
    assert parse_scalar(F4, "1/2 * z^3 - 1") == \
        F4.from_fraction(1, 2) * F4.gen ** 3 - F4.one
    with pytest.raises(ParseError):
        parse_scalar(F4, "z^")
    with pytest.raises(ParseError):
        parse_scalar(F4, "")


def test_parse_spec_preset_job():
    # a syntactically valid preset request; q = z over m = 8
    job = parse_spec("""
[field]
m = 8

[space]
kind = preset
name = gurevich
q = z

[tasks]
ybe
""")
    assert job.field_order == 8
    assert job.space_decl["kind"] == "preset"
    assert job.space_decl["params"]["name"] == "gurevich"
    assert str(job.space_decl["params"]["q"]) == "z"


def test_parse_spec_diagonal_matrix():
    job = parse_spec(TWODIM_JOB)
    qmat = job.space_decl["params"]["q"]
    assert len(qmat) == 2 and len(qmat[0]) == 2
    assert qmat[0][1] == 1
    assert [name for name, _ in job.tasks] == ["sdeg", "nichols"]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_spec("[field]\nm = 4\n[space]\nkind = scalar\nd = 2\nq = z^\n")
    assert err.value.line == 6
    with pytest.raises(ParseError):
        parse_spec("[field]\nm = 4\n[tasks]\nybe\n")  # no space section
    with pytest.raises(ParseError):
        parse_spec("[field]\nm = 4\n[space]\nkind = flip\nd = 2\n[tasks]\nwat\n")


def test_validation_rejects_incompatible_root_orders():
    with pytest.raises(ValidationError):
        parse_spec("""
[field]
m = 4

[space]
kind = flip
d = 2

[tasks]
pareigis = 3
""")


def test_run_twodim_job_results():
    job = parse_spec(TWODIM_JOB)
    report = run(job)
    by_name = {t["name"]: t for t in report.tasks}
    assert by_name["sdeg"]["result"]["value"] == 2
    assert by_name["sdeg"]["result"]["status"] == "certified"
    assert by_name["nichols"]["result"]["dims"] == [1, 2, 2, 2, 1, 0]
    assert report.internal_failure is None


def test_run_gurevich_job_results():
    job = parse_spec(GUREVICH_JOB)
    report = run(job)
    by_name = {t["name"]: t for t in report.tasks}
    assert by_name["bracket"]["result"]["validated"]
    assert by_name["lie_check"]["result"]["status"] == "is_lie_up_to"
    assert by_name["pbw"]["result"]["status"] == "pbw_consistent"
    assert by_name["pbw"]["result"]["gr_dims"] == [1, 3, 6, 10, 15]
    assert by_name["pl_verify"]["result"] == {
        "arity": 2, "pl1": True, "pl2": True, "pl3": True}


def test_empty_task_list_is_echo_only():
    job = parse_spec("[field]\nm = 1\n[space]\nkind = flip\nd = 2\n[tasks]\n")
    report = run(job)
    assert report.tasks == []
    payload = report.payload()
    assert payload["job"]["field_order"] == 1


def test_reports_are_deterministic_and_cache_transparent(tmp_path):
    job = parse_spec(TWODIM_JOB)
    fresh_a = run(job).emit("json")
    fresh_b = run(job).emit("json")
    assert fresh_a == fresh_b
    cache = tmp_path / "cache"
    first = run(job, cache_dir=str(cache))
    second = run(job, cache_dir=str(cache))
    assert [t["cached"] for t in first.tasks] == [False, False]
    assert [t["cached"] for t in second.tasks] == [True, True]
    for a, b in zip(first.tasks, second.tasks):
        assert a["result"] == b["result"]


def test_task_errors_are_captured_per_task():
    job = parse_spec("""
[field]
m = 1

[space]
kind = flip
d = 2

[tasks]
lie_check = 3, 1
nichols = 4
""")
    report = run(job)
    by_name = {t["name"]: t for t in report.tasks}
    # lie_check without a bracket section is a per-task validation error
    assert by_name["lie_check"]["status"] == "error"
    assert by_name["lie_check"]["error"]["type"] == "ValidationError"
    # the sibling task still ran
    assert by_name["nichols"]["result"]["dims"] == [1, 2, 3, 4, 5]


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "job.txt"
    good.write_text(TWODIM_JOB)
    assert main(["--input", str(good), "--format", "text"]) == 0
    capsys.readouterr()
    bad = tmp_path / "bad.txt"
    bad.write_text("[field]\nm = 4\n[space]\nkind = scalar\nd = 2\nq = z^\n[tasks]\nybe\n")
    assert main(["--input", str(bad)]) == 1
    capsys.readouterr()
    assert main(["--input", str(tmp_path / "missing.txt")]) == 1
    capsys.readouterr()


def test_main_task_filter_and_output(tmp_path, capsys):
    jobfile = tmp_path / "job.txt"
    jobfile.write_text(TWODIM_JOB)
    out = tmp_path / "report.json"
    code = main(["--input", str(jobfile), "--task", "nichols",
                 "--output", str(out), "--jobs", "2"])
    assert code == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert [t["name"] for t in payload["tasks"]] == ["nichols"]
    assert payload["tool"]["name"] == "braidcalc"


def test_text_format_renders(tmp_path, capsys):
    jobfile = tmp_path / "job.txt"
    jobfile.write_text(GUREVICH_JOB)
    assert main(["--input", str(jobfile), "--format", "text"]) == 0
    captured = capsys.readouterr()
    assert "pbw" in captured.out
    assert "pbw_consistent" in captured.out


def test_explicit_matrix_space():
    job = parse_spec("""
[field]
m = 1

[space]
kind = explicit
d = 2
matrix = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]

[tasks]
min_poly
nichols = 3
""")
    report = run(job)
    by_name = {t["name"]: t for t in report.tasks}
    # the flip written out as an explicit matrix: an involution
    assert by_name["min_poly"]["result"]["coefficients"] == ["-1", "0", "1"]
    assert by_name["nichols"]["result"]["dims"] == [1, 2, 3, 4]


def test_budget_line_and_per_task_budget_errors():
    job = parse_spec("""
[field]
m = 1

[space]
kind = flip
d = 2
budget = 3

[tasks]
nichols = 3
e_spaces = 2..5
""")
    report = run(job)
    by_name = {t["name"]: t for t in report.tasks}
    assert by_name["nichols"]["status"] == "ok"
    assert by_name["e_spaces"]["status"] == "error"
    assert by_name["e_spaces"]["error"]["type"] == "DegreeBudgetExceeded"


def test_e_spaces_payload_and_cache_roundtrip(tmp_path):
    text = """
[field]
m = 1

[space]
kind = preset
name = gurevich

[tasks]
e_spaces = 2..2
"""
    job = parse_spec(text)
    cache = tmp_path / "cache"
    first = run(job, cache_dir=str(cache))
    payload = first.tasks[0]["result"]["primitives"]["2"]
    assert payload["dim"] == 3
    # named words with exact scalar strings
    row = payload["basis"][0]
    assert set(row) == {"x0.x1", "x1.x0"}
    second = run(job, cache_dir=str(cache))
    assert second.tasks[0]["cached"]
    assert second.tasks[0]["result"] == first.tasks[0]["result"]


def test_pareigis_arity_three_job():
    job = parse_spec("""
[field]
m = 3

[space]
kind = scalar
d = 2
q = z

[tasks]
pareigis = 3, 1
""")
    report = run(job)
    result = report.tasks[0]["result"]
    assert result["arity"] == 3
    assert result["zeta_space_dim"] == 8
    assert result["pi_image_in_primitives"] is True


def test_shipped_job_files_run(capsys):
    import pathlib

    jobs_dir = pathlib.Path(__file__).resolve().parent.parent / "jobs"
    for jobfile in sorted(jobs_dir.glob("*.job")):
        assert main(["--input", str(jobfile), "--format", "text"]) == 0, jobfile
        capsys.readouterr()
