"""Pass@1 test execution via an operator-supplied sandbox command.

The toolkit never interprets candidate code itself. The operator supplies a
command template (e.g. ``["python3", "{path}"]`` or a container wrapper) and
is responsible for sandboxing it; we only write the file, run the command,
and classify the result.
"""
from __future__ import annotations

import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .core import Language, Sample

DEFAULT_TIMEOUT = 5.0

_SUFFIX = {Language.PYTHON: ".py", Language.JAVA: ".java"}


@dataclass(frozen=True)
class ExecutorConfig:
    """Command template plus timeout. ``{path}`` marks the test-file slot."""

    command: tuple[str, ...] = ()
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class ExecutionOutcome:
    kind: str  # pass | fail | timeout | error
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.kind == "pass"


def _render_command(template: tuple[str, ...], path: Path) -> list[str]:
    rendered = [part.replace("{path}", str(path)) for part in template]
    if all("{path}" not in part for part in template):
        rendered.append(str(path))
    return rendered


def _tests_source(sample: Sample) -> str:
    """Structured input/expected pairs become assert lines; strings pass through."""
    if isinstance(sample.tests, str):
        return sample.tests
    if Language(sample.language) is Language.PYTHON:
        return "\n".join(f"assert ({t.input}) == ({t.expected})" for t in sample.tests)
    # a bare java method plus assert lines is not a compilation unit
    raise ValueError(
        f"sample {sample.id}: java tests must be an executable snippet string"
    )


def run_tests(sample: Sample, candidate_code: str, config: ExecutorConfig) -> ExecutionOutcome:
    """Concatenate candidate code with the sample's tests and execute them.

    Exit code 0 means pass. Any nonzero exit is a fail carrying the tail of
    stderr; exceeding the timeout and OS-level launch failures get their own
    outcome kinds so aggregation can distinguish them from genuine failures.
    """
    if not config.command:
        return ExecutionOutcome(
            "error", "no executor command configured; set [executor] command in the config"
        )
    if not sample.tests:
        return ExecutionOutcome("error", f"sample {sample.id} has no tests")

    try:
        tests = _tests_source(sample)
    except ValueError as exc:
        return ExecutionOutcome("error", str(exc))
    program = candidate_code.rstrip("\n") + "\n\n" + tests.rstrip("\n") + "\n"
    suffix = _SUFFIX.get(Language(sample.language), ".txt")
    with tempfile.TemporaryDirectory(prefix="nameforge-exec-") as tmp:
        path = Path(tmp) / f"candidate{suffix}"
        path.write_text(program, encoding="utf-8")
        argv = _render_command(config.command, path)
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                timeout=config.timeout,
            )
        except subprocess.TimeoutExpired:
            return ExecutionOutcome("timeout", f"exceeded {config.timeout:g}s")
        except OSError as exc:
            return ExecutionOutcome("error", f"could not launch executor: {exc}")
    if proc.returncode == 0:
        return ExecutionOutcome("pass")
    tail = (proc.stderr or proc.stdout or "").strip().splitlines()
    return ExecutionOutcome("fail", "\n".join(tail[-5:]))
