"""Drive the audit service over HTTP, the way the browser UI does.

Starts the loopback service against a scratch directory, opens a session,
then filters, summarizes, and fetches a checkpoint snapshot.
"""

import json
import tempfile
import threading
import time
import urllib.parse
import urllib.request
from pathlib import Path

import uvicorn

from sheetaudit.sample import write_fixture
from sheetaudit.service import create_app

scratch = Path(tempfile.mkdtemp(prefix="sheetaudit-demo-"))
write_fixture(scratch / "cashflow.ods")

PORT = 8841
config = uvicorn.Config(
    create_app(root=scratch), host="127.0.0.1", port=PORT, log_level="warning"
)
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
BASE = f"http://127.0.0.1:{PORT}"


def post(path, payload):
    request = urllib.request.Request(
        BASE + path, json.dumps(payload).encode(), {"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(request) as response:
        return json.load(response)


def get(path, **params):
    query = urllib.parse.urlencode(params, doseq=True)
    with urllib.request.urlopen(f"{BASE}{path}?{query}") as response:
        return json.load(response)


session = post("/sessions", {"path": "cashflow.ods"})
sid = session["session_id"]
print(f"session {sid[:8]}...  records={session['summary']['total']}")

records = get(f"/sessions/{sid}/changes", filter="-transition=empty->any")["records"]
print(f"non-initial changes: {len(records)}")

records = get(f"/sessions/{sid}/changes", filter="+kind=row-insert")["records"]
print(f"insertions: {records[0]['detail']!r}")

findings = get(f"/sessions/{sid}/findings", at="2003-03-28T21:55:00")["findings"]
print(f"findings at 21:55: {[(f['check'], f['address']) for f in findings]}")

snapshot = get(f"/sessions/{sid}/snapshot", at="2003-03-28T21:55:00")
sheet = snapshot["sheets"][0]
print(f"E18 at 21:55: {sheet['cells'][17][4]['text']}")

server.should_exit = True
thread.join(timeout=5)
print("done; the service never opened the file for writing")
