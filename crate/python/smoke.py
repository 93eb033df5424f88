# Copyright 2026 The Compadv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke test for the compadv_py extension module."""

import json

import compadv_py as ca

SPEC = {
    "name": "orders",
    "rows": 20000,
    "seed": 3,
    "columns": [
        {"name": "okey", "type": "int64", "domain": 20000},
        {"name": "cust", "type": "int64", "domain": 2000, "zipf": 1.0},
        {"name": "status", "type": "char(1)", "domain": 3, "zipf": 1.0},
        {"name": "odate", "type": "date", "domain": 2400, "zipf": 0.5},
        {"name": "note", "type": "char(30)", "domain": 8000, "zipf": 1.0, "prefix_len": 3},
    ],
}

WORKLOAD = [
    {"kind": "SELECT", "table": "orders",
     "predicates": [{"column": "cust", "op": "=", "lo": 42}],
     "columns": ["odate", "status"]},
    {"kind": "SELECT", "table": "orders",
     "predicates": [{"column": "odate", "op": "between", "lo": "1993-01-01", "hi": "1993-03-31"}],
     "columns": ["note"], "weight": 2},
    {"kind": "INSERT", "table": "orders", "rows_per_exec": 100},
]


def main():
    t = ca.Table.synthetic(json.dumps(SPEC))
    assert t.rows == 20000 and t.name == "orders"
    assert [c for c, _ in t.columns] == ["okey", "cust", "status", "odate", "note"]
    assert json.loads(t.stats_json())

    ix = ca.Index("orders", ["cust", "odate"], method="PAGE")
    built = ca.build_index(t, ix)
    assert 0 < built.cf <= 1.0 + 1.0 / built.pages, built.cf
    same = ca.Index.from_json(ix.to_json())
    assert same.id == ix.id

    targets = [ca.Index("orders", ["cust"], method=m) for m in ("NS", "PAGE")] + [ix]
    est = ca.estimate_sizes([t], targets, e=0.5, q=0.9, seed=1)
    assert len(est) == 3
    for e in est:
        assert e.pages > 0 and e.state in ("SAMPLED", "DEDUCED", "EXACT"), e.state
    truth = built.compressed_pages
    got = next(e for e in est if e.index == ix.id).pages
    assert abs(got / truth - 1) < 0.5, (got, truth)

    rec = ca.tune([t], json.dumps(WORKLOAD), budget_pages=200, e=0.3, seed=4)
    assert rec.total_pages <= 200
    assert rec.cost_after <= rec.cost_before
    again = ca.tune([t], json.dumps(WORKLOAD), budget_pages=200, e=0.3, seed=4)
    assert rec.to_json() == again.to_json()

    code, out, err = ca.run_cli(["frobnicate"])
    assert code == 2 and err

    try:
        ca.Index("orders", ["cust"], method="ZIP")
    except ca.CompadvError:
        pass
    else:
        raise AssertionError("bad codec accepted")

    print("smoke ok:", rec)


if __name__ == "__main__":
    main()
