import datetime
import hashlib
import json
import os

from pymagnomech import __version__
from pymagnomech.SystemConfig import as_file_dict
from pymagnomech.util.table_io import json_text, sha256_of, write_file


class RunManifest:
    """
    Everything needed to reproduce an output directory. The timestamp and
    the file hashes are left out of inputs_sha256.
    """
    def __init__(self, command, argv=(), config=None, grid=None, assumptions=(), extra=None,
                 version=__version__, timestamp=None):
        self.command = command
        self.argv = list(argv)
        self.config = as_file_dict(config) if config is not None else None
        self.grid = grid
        self.assumptions = list(assumptions)
        self.extra = dict(extra or {})
        self.version = version
        self.timestamp = timestamp or datetime.datetime.now(datetime.timezone.utc).isoformat()
        self.files = {}

    def inputs(self):
        return dict(
            command=self.command, argv=self.argv, config=self.config, grid=self.grid,
            assumptions=self.assumptions, extra=self.extra, version=self.version,
        )

    def inputs_sha256(self):
        return hashlib.sha256(json_text(self.inputs()).encode("utf8")).hexdigest()

    def add_file(self, path):
        self.files[os.path.basename(path)] = sha256_of(path)

    def as_dict(self):
        d = self.inputs()
        d.update(timestamp=self.timestamp, inputs_sha256=self.inputs_sha256(), files=dict(self.files))
        return d

    def as_json(self):
        return json_text(self.as_dict())

    @classmethod
    def from_json(class_, the_json):
        d = json.loads(the_json)
        manifest = class_(
            d["command"], d.get("argv", ()), grid=d.get("grid"), assumptions=d.get("assumptions", ()),
            extra=d.get("extra"), version=d.get("version", __version__), timestamp=d.get("timestamp"))
        manifest.config = d.get("config")
        manifest.files = dict(d.get("files", {}))
        return manifest

    def write(self, directory, name="manifest.json"):
        return write_file(os.path.join(directory, name), self.as_json())

    def __repr__(self):
        return "<RunManifest %s %s>" % (self.command, self.inputs_sha256()[:12])
