"""Tool plugin configuration: a YAML document per tool.

Example::

    docker_image:
        default: qspprotocol/securify-usolc
        solc<5: qspprotocol/securify-0.4.25
    cmd: --livestatusfile /results/output.json -fs

    output_in_files:
      folder: /results/output.json

``docker_image.default`` and ``cmd`` are required. ``solc<5`` names an
alternate image for contracts pinned below compiler version 0.5.0.
When ``output_in_files.folder`` is absent, findings are parsed from the
tool's printed output.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from solsweep.ir.pragma import VersionClass, VersionConstraint


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ToolDescriptor:
    id: str
    title: str
    image_default: str
    command: str
    description: str = ""
    image_solc_lt5: str | None = None
    output_file: str | None = None
    parser_id: str = ""
    native: bool = False  # runs in-process instead of in a container

    def __post_init__(self) -> None:
        if not self.image_default:
            raise ConfigError(f"tool {self.id!r}: docker image must be non-empty")
        if not self.command:
            raise ConfigError(f"tool {self.id!r}: command must be non-empty")
        if not self.parser_id:
            object.__setattr__(self, "parser_id", self.id)


def load_tool_config(text: str, tool_id: str) -> ToolDescriptor:
    """Build a descriptor from a plugin configuration document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"tool {tool_id!r}: malformed configuration: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"tool {tool_id!r}: configuration must be a key-value document")

    images = doc.get("docker_image")
    if not isinstance(images, dict) or "default" not in images:
        raise ConfigError(f"tool {tool_id!r}: missing docker_image.default")
    cmd = doc.get("cmd")
    if cmd is None or not str(cmd).strip():
        raise ConfigError(f"tool {tool_id!r}: missing cmd")

    output_file = None
    if "output_in_files" in doc:
        output = doc["output_in_files"]
        if not isinstance(output, dict) or "folder" not in output:
            raise ConfigError(f"tool {tool_id!r}: output_in_files requires a folder key")
        output_file = str(output["folder"])

    return ToolDescriptor(
        id=tool_id,
        title=str(doc.get("name", tool_id)),
        description=str(doc.get("description", "") or ""),
        image_default=str(images["default"]),
        image_solc_lt5=str(images["solc<5"]) if images.get("solc<5") else None,
        command=str(cmd).strip(),
        output_file=output_file,
        parser_id=str(doc.get("parser", "") or ""),
    )


def load_tool_dir(plugin_dir: str | Path) -> ToolDescriptor:
    plugin_dir = Path(plugin_dir)
    config = plugin_dir / "config.yaml"
    if not config.is_file():
        raise ConfigError(f"tool plugin {plugin_dir.name!r} has no config.yaml")
    return load_tool_config(config.read_text(encoding="utf-8"), plugin_dir.name)


def select_image(tool: ToolDescriptor, version: VersionConstraint) -> str:
    """Pick the container image for a contract's compiler-version class.

    The below-0.5.0 image is used only when the constraint provably admits
    nothing at or above 0.5.0; unknown or mixed constraints take the default.
    """
    if version.classification is VersionClass.BELOW_V5 and tool.image_solc_lt5:
        return tool.image_solc_lt5
    return tool.image_default
