"""Collects one status line per acceptance criterion for the terminal summary."""

LINES: dict[str, str] = {}


def record(key: str, passed: bool, seconds: float, limit: float | None, detail: str) -> str:
    status = "PASS" if passed else "FAIL"
    budget = "" if limit is None else f" (limit {limit:g} s)"
    line = f"criterion {key}: {status} in {seconds:.2f} s{budget}: {detail}"
    LINES[key] = line
    print(line)
    return line
