RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, line: str) -> None:
    RESULTS[n] = (ok, line)
    print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {line}")
