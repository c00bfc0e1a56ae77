"""A competitor connected over the newline-delimited JSON wire protocol.

A scripted remote answerer runs in a thread, speaking the wire protocol
over TCP: it watches clue_end messages, buzzes on clue 2, and answers
from its own table when granted. The engine treats it exactly like an
in-process agent.

Run: python3 demos/remote_agent_wire.py
"""

import json
import socket
import threading

from riddle_arena import MatchConfig, RemoteAgent, Riddle, Subject, run_match

RIDDLES = [
    Riddle(
        id="phys-demo",
        subject=Subject.PHYSICS,
        contest_no=1,
        year=2020,
        clues=[
            "I am measured in hertz.",
            "I count oscillations per second.",
            "Multiply me by wavelength to get wave speed.",
        ],
        gold_answers=["Frequency"],
    )
]

ANSWERS = {"phys-demo": "Frequency"}


def scripted_remote(server_sock):
    """One connection, NDJSON lines in, buzz/answer lines out."""
    conn, _ = server_sock.accept()
    current = None
    buffer = b""
    while True:
        chunk = conn.recv(4096)
        if not chunk:
            return
        buffer += chunk
        while b"\n" in buffer:
            line, buffer = buffer.split(b"\n", 1)
            msg = json.loads(line)
            if msg["type"] == "riddle_start":
                current = msg["riddle_id"]
                print(f"  remote saw riddle_start: {msg['riddle_id']} ({msg['subject']})")
            elif msg["type"] == "clue_end" and msg["clue_index"] == 2:
                print("  remote buzzes after clue 2")
                conn.sendall(json.dumps({"type": "buzz", "confidence": 0.9}).encode() + b"\n")
            elif msg["type"] == "buzz_granted":
                answer = ANSWERS.get(current, "")
                print(f"  remote answers {answer!r}")
                conn.sendall(json.dumps({"type": "answer", "text": answer}).encode() + b"\n")


server = socket.create_server(("127.0.0.1", 0))
port = server.getsockname()[1]
threading.Thread(target=scripted_remote, args=(server,), daemon=True).start()

print(f"scripted remote listening on 127.0.0.1:{port}")
agent = RemoteAgent(f"127.0.0.1:{port}", buzz_forward_ms=20, answer_ms=1000)
config = MatchConfig(team_ids=("wire-team",), words_per_second=25.0)

result, events = run_match(config, RIDDLES, {"wire-team": agent})
agent.close()
server.close()

print(f"\nscores: {result.scores}")
outcome = result.riddles[0]
print(f"answered on clue {outcome.answered_on_clue} for {outcome.points_awarded} points")
