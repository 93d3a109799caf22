"""HTTP scoring service.

POST /api/v2/score?api-version=2 takes the documented request shape::

    {"Inputs": {"input1": [{"Model": "...", "Year": "...", "Battery": "...",
                            "Price": "0", "Miles": "...", "Date": "..."}]},
     "GlobalParameters": {}}

and answers with Results.output1, one record per input record: every input
field echoed verbatim, a "DateCreated" timestamp when Date was supplied,
and "Scored Labels" carrying the prediction as shortest round-trip decimal
text. Authorization (Bearer token) is checked before the body is even
read; bad tokens get 401 {"error": "unauthorized"}, malformed bodies get
400 naming the first violation. GET /healthz and GET /api/v2/metadata
serve liveness and model descriptions. CORS is open so a browser frontend
can call the API directly.

The loaded model is immutable and shared across request threads; scoring
allocates no per-request state beyond the response, so concurrent
identical requests produce identical responses.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import asdict, dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import numpy as np

from .data.encoding import EncodingError, encode_record
from .data.table import DataError, _parse_month, parse_csv, to_csv, ColumnSchema, Dataset
from .learners.model import FittedModel, SCORED_COLUMN
from .learners.persistence import load_model_file
from .metrics import DegenerateVarianceError, EvaluationReport, evaluate

SCORE_PATH = "/api/v2/score"
METADATA_PATH = "/api/v2/metadata"
HEALTH_PATH = "/healthz"

REQUIRED_FIELDS = ("Model", "Year", "Battery", "Miles")


class RequestError(ValueError):
    """A 400: the message names the first violation found."""


def format_label(value: float) -> str:
    """Shortest decimal text that parses back to exactly this float."""
    return np.format_float_positional(float(value), trim="-")


def format_date_created(date_text: str) -> str:
    """YYYY-MM-DD -> M/D/YYYY 12:00:00 AM (no zero padding)."""
    tag = _parse_month(date_text)
    if tag is None:
        raise RequestError(f"Date {date_text!r} is not a YYYY-MM-DD date")
    year, month, day = int(tag[0:4]), int(tag[5:7]), int(tag[8:10])
    return f"{month}/{day}/{year} 12:00:00 AM"


def validate_request_body(body: bytes) -> list[dict]:
    """Parse and check a scoring request; returns the input records."""
    try:
        doc = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        raise RequestError("body is not valid JSON") from None
    if not isinstance(doc, dict) or "Inputs" not in doc:
        raise RequestError("body must carry an 'Inputs' object")
    inputs = doc["Inputs"]
    if not isinstance(inputs, dict) or "input1" not in inputs:
        raise RequestError("'Inputs' must carry an 'input1' array")
    records = inputs["input1"]
    if not isinstance(records, list) or not records:
        raise RequestError("'input1' must be a non-empty array of records")
    for i, record in enumerate(records):
        if not isinstance(record, dict):
            raise RequestError(f"input1[{i}] is not an object")
        for field in REQUIRED_FIELDS:
            if field not in record:
                raise RequestError(f"input1[{i}] lacks required field {field!r}")
        for key, value in record.items():
            if not isinstance(value, str):
                raise RequestError(f"input1[{i}].{key} must be a string")
    return records


def score_records(model: FittedModel, records: list[dict]) -> list[dict]:
    out = []
    for i, record in enumerate(records):
        try:
            prediction = model.predict_record(record)
        except EncodingError as exc:
            raise RequestError(f"input1[{i}]: {exc}") from None
        answer = dict(record)  # echo every input field verbatim, in order
        if "Date" in record:
            answer["DateCreated"] = format_date_created(record["Date"])
        answer[SCORED_COLUMN] = format_label(prediction)
        out.append(answer)
    return out


@dataclass
class BatchScoreResult:
    scored: Dataset          # input columns + Scored Labels + Error
    report: EvaluationReport | None  # None when targets were constant
    mae: float
    rmse: float

    def to_csv(self) -> str:
        return to_csv(self.scored)


def batch_score_file(model: FittedModel, csv_path) -> BatchScoreResult:
    """Score every row of a CSV with a Price column and report the error
    between listed and predicted prices (the per-row error column is
    listed minus predicted)."""
    with open(csv_path, "r", encoding="utf-8") as fh:
        ds = parse_csv(fh.read())
    if "Price" not in ds.column_names:
        raise DataError("batch scoring needs a Price column to compare against")
    preds = model.predict_dataset(ds)
    price_idx = ds.column_index("Price")
    schema = ds.schema + (
        ColumnSchema(SCORED_COLUMN, "numeric", "passthrough"),
        ColumnSchema("Error", "numeric", "passthrough"),
    )
    rows = []
    pairs = []
    for row, pred in zip(ds.rows, preds):
        price = row[price_idx]
        error = None if price is None else float(price - pred)
        rows.append(row + (float(pred), error))
        if price is not None:
            pairs.append((price, float(pred)))
    scored = Dataset(schema, tuple(rows))
    if not pairs:
        raise DataError("no rows carry a Price value to evaluate against")
    y = [p for p, _ in pairs]
    y_hat = [q for _, q in pairs]
    try:
        report = evaluate(y, y_hat)
        return BatchScoreResult(scored, report, report.mae, report.rmse)
    except DegenerateVarianceError as err:
        return BatchScoreResult(scored, None, err.mae, err.rmse)


def _make_handler(model: FittedModel, token: str, quiet: bool):
    model_lock_free = model  # shared immutable state; no lock needed

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            if not quiet:
                super().log_message(fmt, *args)

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type, Authorization")

        def _reply(self, status: int, payload: dict, close: bool = False):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self._cors()
            if close:
                self.send_header("Connection", "close")
                self.close_connection = True
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            path = urlparse(self.path).path
            if path == HEALTH_PATH:
                predictor = model_lock_free.predictor
                trees = len(getattr(predictor, "trees", [])) or (1 if model_lock_free.kind == "tree" else 0)
                self._reply(200, {
                    "status": "ok",
                    "model_kind": model_lock_free.kind,
                    "trees": trees,
                    "features": model_lock_free.encoding.width,
                })
            elif path == METADATA_PATH:
                self._reply(200, {
                    "model_kind": model_lock_free.kind,
                    "params": asdict(model_lock_free.config),
                    "target": model_lock_free.encoding.target,
                    "feature_names": model_lock_free.encoding.feature_names,
                    "schema": [asdict(c) for c in model_lock_free.schema],
                })
            else:
                self._reply(404, {"error": "not found"})

        def do_POST(self):
            parsed = urlparse(self.path)
            if parsed.path != SCORE_PATH:
                self._reply(404, {"error": "not found"}, close=True)
                return
            # authorization first: no body is read for unauthorized callers
            auth = self.headers.get("Authorization", "")
            if auth != f"Bearer {token}":
                self._reply(401, {"error": "unauthorized"}, close=True)
                return
            query = parse_qs(parsed.query)
            if query.get("api-version") != ["2"]:
                self._reply(400, {"error": "query must carry api-version=2"}, close=True)
                return
            content_type = self.headers.get("Content-Type", "")
            if not content_type.startswith("application/json"):
                self._reply(400, {"error": "Content-Type must be application/json"}, close=True)
                return
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length)
            try:
                records = validate_request_body(body)
                output = score_records(model_lock_free, records)
            except RequestError as exc:
                self._reply(400, {"error": str(exc)}, close=True)
                return
            self._reply(200, {"Results": {"output1": output}})

    return Handler


def build_server(model: FittedModel, token: str, port: int = 0, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind a threading HTTP server for the model; port 0 picks a free one."""
    handler = _make_handler(model, token, quiet=True)
    return ThreadingHTTPServer((host, port), handler)


def resolve_token(token: str | None = None, token_file=None) -> str:
    if token:
        return token
    if token_file:
        with open(token_file, "r", encoding="utf-8") as fh:
            value = fh.read().strip()
        if not value:
            raise DataError(f"token file {token_file} is empty")
        return value
    return secrets.token_hex(16)


def serve(model_path, port: int, token: str, host: str = "0.0.0.0", quiet: bool = False) -> ThreadingHTTPServer:
    """Load a model file and serve it until interrupted. A bad model file
    raises before any socket is bound."""
    model = load_model_file(model_path)
    handler = _make_handler(model, token, quiet=quiet)
    server = ThreadingHTTPServer((host, port), handler)
    return server


def run_in_thread(server: ThreadingHTTPServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
