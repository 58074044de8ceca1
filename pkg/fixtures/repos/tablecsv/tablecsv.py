"""CSV tabulation helpers used by the tablecsv command-line tools."""

import csv
from collections import Counter


def frequency_table(lines):
    """Count occurrences of each non-empty line, most common first."""
    counter = Counter(line.strip() for line in lines if line.strip())
    return counter.most_common()


def write_table(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["word", "count"])
        writer.writerows(rows)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def sum_column(path, column):
    return sum(float(row[column]) for row in read_rows(path))
