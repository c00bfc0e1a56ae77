"""Scripted wire-protocol remotes used by the agent and service tests."""

import json
import socket
import threading


class ScriptedRemoteServer:
    """Accepts one connection per match and plays a fixed strategy.

    Buzzes at the end of clue ``buzz_at_clue`` and answers with
    ``answers[riddle_id]``. Misbehavior toggles let tests exercise the
    protocol-violation paths.
    """

    def __init__(
        self,
        buzz_at_clue=1,
        answers=None,
        *,
        answer_without_grant=False,
        send_garbage=False,
        unknown_type=False,
        confidence=1.0,
    ):
        self.buzz_at_clue = buzz_at_clue
        self.answers = answers or {}
        self.answer_without_grant = answer_without_grant
        self.send_garbage = send_garbage
        self.unknown_type = unknown_type
        self.confidence = confidence
        self.sock = socket.create_server(("127.0.0.1", 0))
        self.port = self.sock.getsockname()[1]
        self.endpoint = f"127.0.0.1:{self.port}"
        self.thread = threading.Thread(target=self._serve, daemon=True)
        self.thread.start()

    def _serve(self):
        try:
            conn, _ = self.sock.accept()
        except OSError:
            return
        current_riddle = None
        buffer = b""
        try:
            while True:
                chunk = conn.recv(4096)
                if not chunk:
                    break
                buffer += chunk
                while b"\n" in buffer:
                    line, buffer = buffer.split(b"\n", 1)
                    if not line.strip():
                        continue
                    msg = json.loads(line)
                    kind = msg.get("type")
                    if kind == "riddle_start":
                        current_riddle = msg["riddle_id"]
                        if self.send_garbage:
                            conn.sendall(b"this is not json{{{\n")
                        if self.unknown_type:
                            conn.sendall(json.dumps({"type": "telemetry", "x": 1}).encode() + b"\n")
                        if self.answer_without_grant:
                            conn.sendall(
                                json.dumps({"type": "answer", "text": "premature"}).encode() + b"\n"
                            )
                    elif kind == "clue_end" and msg["clue_index"] == self.buzz_at_clue:
                        conn.sendall(
                            json.dumps({"type": "buzz", "confidence": self.confidence}).encode()
                            + b"\n"
                        )
                    elif kind == "buzz_granted":
                        text = self.answers.get(current_riddle, "")
                        conn.sendall(json.dumps({"type": "answer", "text": text}).encode() + b"\n")
        except OSError:
            pass
        finally:
            try:
                conn.close()
            except OSError:
                pass

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


class SilentRemoteServer:
    """Accepts the connection, reads everything, never replies."""

    def __init__(self):
        self.sock = socket.create_server(("127.0.0.1", 0))
        self.port = self.sock.getsockname()[1]
        self.endpoint = f"127.0.0.1:{self.port}"
        self.thread = threading.Thread(target=self._serve, daemon=True)
        self.thread.start()

    def _serve(self):
        try:
            conn, _ = self.sock.accept()
            while conn.recv(4096):
                pass
        except OSError:
            pass

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass


class DroppingRemoteServer:
    """Buzzes at clue 1 of the first riddle, then drops the connection."""

    def __init__(self):
        self.sock = socket.create_server(("127.0.0.1", 0))
        self.port = self.sock.getsockname()[1]
        self.endpoint = f"127.0.0.1:{self.port}"
        self.thread = threading.Thread(target=self._serve, daemon=True)
        self.thread.start()

    def _serve(self):
        try:
            conn, _ = self.sock.accept()
        except OSError:
            return
        buffer = b""
        try:
            while True:
                chunk = conn.recv(4096)
                if not chunk:
                    return
                buffer += chunk
                while b"\n" in buffer:
                    line, buffer = buffer.split(b"\n", 1)
                    if not line.strip():
                        continue
                    msg = json.loads(line)
                    if msg.get("type") == "clue_end" and msg["clue_index"] == 1:
                        conn.close()
                        return
        except OSError:
            pass

    def close(self):
        try:
            self.sock.close()
        except OSError:
            pass
