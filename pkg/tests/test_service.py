import json
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from carprice.data import DataError, parse_csv, synthesize, to_csv
from carprice.learners import LearnerConfig, save_model, train_model
from carprice.service import (
    batch_score_file,
    build_server,
    format_date_created,
    format_label,
    resolve_token,
    run_in_thread,
    serve,
)

TOKEN = "test-token-123"

# the documented wire request, replayed verbatim
WIRE_REQUEST = {
    "Inputs": {
        "input1": [
            {
                "Model": "Model X",
                "Year": "2017",
                "Price": "0",
                "Battery": "75",
                "Miles": "19000",
                "Date": "2019-01-01",
            }
        ]
    },
    "GlobalParameters": {},
}


@pytest.fixture(scope="module")
def model():
    return train_model(synthesize(400, 42), LearnerConfig(algo="boosted", trees=20))


@pytest.fixture(scope="module")
def server(model):
    srv = build_server(model, TOKEN)
    run_in_thread(srv)
    yield srv
    srv.shutdown()


def call(server, body, token=TOKEN, path="/api/v2/score?api-version=2&format=swagger",
         method="POST", content_type="application/json"):
    port = server.server_address[1]
    url = f"http://127.0.0.1:{port}{path}"
    data = json.dumps(body).encode() if isinstance(body, (dict, list)) else body
    req = urllib.request.Request(url, data=data, method=method)
    if token is not None:
        req.add_header("Authorization", f"Bearer {token}")
    if content_type:
        req.add_header("Content-Type", content_type)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode())


class TestScoreEndpoint:
    def test_wire_request_round_trip(self, server, model):
        status, doc = call(server, WIRE_REQUEST)
        assert status == 200
        output = doc["Results"]["output1"]
        assert len(output) == 1
        record = output[0]
        for key, value in WIRE_REQUEST["Inputs"]["input1"][0].items():
            assert record[key] == value
        assert record["DateCreated"] == "1/1/2019 12:00:00 AM"
        predicted = float(record["Scored Labels"])
        assert predicted == model.predict_record(WIRE_REQUEST["Inputs"]["input1"][0])

    def test_missing_token_unauthorized(self, server):
        status, doc = call(server, WIRE_REQUEST, token=None)
        assert status == 401
        assert doc == {"error": "unauthorized"}

    def test_wrong_token_unauthorized(self, server):
        status, doc = call(server, WIRE_REQUEST, token="nope")
        assert status == 401
        assert doc == {"error": "unauthorized"}

    def test_auth_checked_before_body_parsing(self, server):
        # a garbage body must still 401, proving no parsing happened first
        status, doc = call(server, b"{this is not json", token=None)
        assert status == 401
        assert doc == {"error": "unauthorized"}

    def test_missing_api_version(self, server):
        status, doc = call(server, WIRE_REQUEST, path="/api/v2/score")
        assert status == 400
        assert "api-version" in doc["error"]

    def test_wrong_content_type(self, server):
        status, doc = call(server, WIRE_REQUEST, content_type="text/plain")
        assert status == 400
        assert "Content-Type" in doc["error"]

    def test_malformed_json(self, server):
        status, doc = call(server, b"{nope")
        assert status == 400
        assert "JSON" in doc["error"]

    def test_empty_input1(self, server):
        status, doc = call(server, {"Inputs": {"input1": []}, "GlobalParameters": {}})
        assert status == 400
        assert "input1" in doc["error"]

    def test_missing_required_field(self, server):
        body = {"Inputs": {"input1": [{"Model": "Model X", "Year": "2017", "Battery": "75"}]}}
        status, doc = call(server, body)
        assert status == 400
        assert "Miles" in doc["error"]

    def test_non_string_value_rejected(self, server):
        record = dict(WIRE_REQUEST["Inputs"]["input1"][0], Year=2017)
        status, doc = call(server, {"Inputs": {"input1": [record]}})
        assert status == 400
        assert "Year" in doc["error"]

    def test_unparseable_miles_rejected(self, server):
        record = dict(WIRE_REQUEST["Inputs"]["input1"][0], Miles="a lot")
        status, doc = call(server, {"Inputs": {"input1": [record]}})
        assert status == 400
        assert "Miles" in doc["error"]

    def test_multi_record_parallel_output(self, server):
        records = [dict(WIRE_REQUEST["Inputs"]["input1"][0], Miles=str(m)) for m in (0, 5000, 10000)]
        status, doc = call(server, {"Inputs": {"input1": records}})
        assert status == 200
        output = doc["Results"]["output1"]
        assert [r["Miles"] for r in output] == ["0", "5000", "10000"]

    def test_record_without_date_has_no_datecreated(self, server):
        record = {k: v for k, v in WIRE_REQUEST["Inputs"]["input1"][0].items() if k != "Date"}
        status, doc = call(server, {"Inputs": {"input1": [record]}})
        assert status == 200
        assert "DateCreated" not in doc["Results"]["output1"][0]

    def test_concurrent_identical_requests(self, server):
        with ThreadPoolExecutor(max_workers=4) as pool:
            answers = list(pool.map(lambda _: call(server, WIRE_REQUEST), range(8)))
        assert all(status == 200 for status, _ in answers)
        bodies = [json.dumps(doc, sort_keys=True) for _, doc in answers]
        assert len(set(bodies)) == 1

    def test_model_not_mutated_by_scoring(self, server, model):
        before = save_model(model)
        for _ in range(3):
            call(server, WIRE_REQUEST)
        assert save_model(model) == before

    def test_unknown_path_404(self, server):
        status, doc = call(server, WIRE_REQUEST, path="/api/v1/score?api-version=2")
        assert status == 404


class TestConstantModel:
    def test_scored_label_is_bare_integer_text(self):
        csv = "Model,Year,Battery,Price,Miles\n" + "\n".join(
            f"Model S,201{i % 3},Base,5,{1000 * i}" for i in range(6)
        )
        model = train_model(parse_csv(csv), LearnerConfig(algo="tree", min_samples_leaf=1))
        server = build_server(model, TOKEN)
        run_in_thread(server)
        try:
            record = {"Model": "Model S", "Year": "2013", "Battery": "Base", "Miles": "100"}
            status, doc = call(server, {"Inputs": {"input1": [record]}})
            assert status == 200
            assert doc["Results"]["output1"][0]["Scored Labels"] == "5"
        finally:
            server.shutdown()


class TestMetadataEndpoints:
    def test_healthz(self, server):
        port = server.server_address[1]
        with urllib.request.urlopen(f"http://127.0.0.1:{port}/healthz") as resp:
            doc = json.loads(resp.read().decode())
        assert resp.status == 200
        assert doc["model_kind"] == "boosted"
        assert doc["trees"] == 20

    def test_metadata(self, server, model):
        port = server.server_address[1]
        with urllib.request.urlopen(f"http://127.0.0.1:{port}/api/v2/metadata") as resp:
            doc = json.loads(resp.read().decode())
        assert doc["target"] == "Price"
        assert doc["feature_names"] == model.encoding.feature_names

    def test_cors_preflight(self, server):
        port = server.server_address[1]
        req = urllib.request.Request(f"http://127.0.0.1:{port}/api/v2/score", method="OPTIONS")
        with urllib.request.urlopen(req) as resp:
            assert resp.status == 204
            assert resp.headers["Access-Control-Allow-Origin"] == "*"
            assert "Authorization" in resp.headers["Access-Control-Allow-Headers"]


class TestFormatting:
    def test_label_is_shortest_round_trip(self):
        for value in (81789.6640625, 5.0, 2.5, 36950.03516, 1.0 / 3.0):
            text = format_label(value)
            assert float(text) == value
        assert format_label(5.0) == "5"
        assert format_label(81789.6640625) == "81789.6640625"

    def test_date_created_format(self):
        assert format_date_created("2019-01-01") == "1/1/2019 12:00:00 AM"
        assert format_date_created("2019-12-25") == "12/25/2019 12:00:00 AM"


class TestBatchScore:
    def test_row_count_and_error_column(self, model, tmp_path):
        holdout = synthesize(400, 7)
        path = tmp_path / "holdout.csv"
        path.write_text(to_csv(holdout))
        result = batch_score_file(model, path)
        assert len(result.scored) == 400
        assert result.scored.column_names[-2:] == ["Scored Labels", "Error"]
        prices = holdout.column("Price")
        preds = result.scored.column("Scored Labels")
        errors = result.scored.column("Error")
        assert errors[0] == prices[0] - preds[0]

    def test_beats_mean_predictor(self, model, tmp_path):
        holdout = synthesize(400, 7)
        path = tmp_path / "holdout.csv"
        path.write_text(to_csv(holdout))
        result = batch_score_file(model, path)
        import numpy as np

        prices = np.array(holdout.column("Price"))
        mean_rmse = float(np.sqrt(np.mean((prices - prices.mean()) ** 2)))
        assert result.report.rmse < mean_rmse

    def test_constant_prices_degenerate(self, tmp_path):
        csv = "Model,Year,Battery,Price,Miles\n" + "\n".join(
            f"Model S,2013,Base,5,{100 * i}" for i in range(4)
        )
        model = train_model(parse_csv(csv), LearnerConfig(algo="tree", min_samples_leaf=1))
        path = tmp_path / "flat.csv"
        path.write_text(csv)
        result = batch_score_file(model, path)
        assert result.report is None
        assert result.rmse == 0.0 and result.mae == 0.0

    def test_missing_price_column(self, model, tmp_path):
        path = tmp_path / "noprices.csv"
        path.write_text("Model,Year,Battery,Miles\nModel S,2013,Base,100\n")
        with pytest.raises(DataError):
            batch_score_file(model, path)


class TestServe:
    def test_bad_model_path_never_binds(self, tmp_path):
        with pytest.raises(OSError):
            serve(tmp_path / "missing.json", port=0, token=TOKEN)

    def test_good_model_path_serves(self, model, tmp_path):
        path = tmp_path / "m.json"
        save_model(model, path)
        srv = serve(path, port=0, token=TOKEN, host="127.0.0.1", quiet=True)
        run_in_thread(srv)
        try:
            status, doc = call(srv, WIRE_REQUEST)
            assert status == 200
        finally:
            srv.shutdown()


def test_resolve_token(tmp_path):
    assert resolve_token("abc") == "abc"
    f = tmp_path / "token.txt"
    f.write_text("  secret  \n")
    assert resolve_token(None, f) == "secret"
    generated = resolve_token()
    assert len(generated) == 32
