"""Result lines recorded by the acceptance suite, keyed by criterion number."""

LINES: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    LINES[number] = line
    print(line)
    return line
