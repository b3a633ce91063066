"""Collects one pass/fail line per acceptance criterion."""
RESULTS = {}


def record(number, title, ok, detail=""):
    RESULTS[number] = (title, bool(ok), detail)
    line = format_line(number)
    print(line)
    return line


def format_line(number):
    title, ok, detail = RESULTS[number]
    tail = f" ({detail})" if detail else ""
    return f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title}{tail}"
