import csv
import io

from dynlocness.benchmark import Pattern
from dynlocness.experiments import bench, compare_measures, reproduce, write_bench_csv


def test_bench_rows_and_csv():
    rows = bench((16, 32), steps=3, repetitions=2)
    assert [r.n for r in rows] == [16, 32]
    assert all(len(r.runs) == 2 and r.mean_seconds > 0 for r in rows)
    buf = io.StringIO()
    write_bench_csv(buf, rows)
    assert buf.getvalue().splitlines()[0] == "n,events,mean_seconds,std_seconds"


def test_bench_largest_under_hundred_times_smallest():
    # sanity example for the default scaling sizes; edges grow ~1000x over this range
    rows = bench((64, 2048), steps=10, repetitions=3)
    ratio = rows[1].mean_seconds / rows[0].mean_seconds
    print(f"time(2048)/time(64) = {ratio:.1f}, edges {rows[1].events}/{rows[0].events}")
    assert ratio < 100


def test_compare_measures_shapes():
    results, benches, timelines = compare_measures(Pattern.MERGE_SPLIT, [0, 1], n=16, steps=6)
    assert len(results) == 8 and set(benches) == {0, 1}
    assert all(len(r.nmi) == len(r.nvi) == len(r.counts) == 7 for r in results)
    assert len(timelines) == 8


def test_reproduce_small(tmp_path):
    summary = reproduce(tmp_path, seeds=2, n=16, steps=6)
    assert len(summary) == 8
    rows = list(csv.DictReader((tmp_path / "summary.csv").open()))
    assert [r["measure"] for r in rows[:4]] == ["jaccard", "adamic-adar", "pref-attach", "cwcn"]
    assert len((tmp_path / "merge-split_metrics.csv").read_text().splitlines()) == 1 + 4 * 7
