"""Tool lookup: directory plugins plus the self-registering built-in detectors."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from solsweep.registry.descriptor import ToolDescriptor, load_tool_dir

BUILTIN_BASE_ID = "builtin-smartcheck"
BUILTIN_EXTENDED_ID = "builtin-smartcheck-ext"

#: Pseudo image reference for tools executed in-process.
NATIVE_IMAGE = "native"


class UnknownTool(Exception):
    def __init__(self, tool_id: str, known: list[str]):
        super().__init__(f"unknown tool {tool_id!r}; available: {', '.join(known) or '(none)'}")
        self.tool_id = tool_id


def builtin_descriptors() -> list[ToolDescriptor]:
    return [
        ToolDescriptor(
            id=BUILTIN_BASE_ID,
            title="Built-in pattern detector (base rules)",
            description=(
                "Bundled lexical detector: tx.origin authorization and "
                "time values in comparisons."
            ),
            image_default=NATIVE_IMAGE,
            command="(in-process)",
            parser_id="builtin",
            native=True,
        ),
        ToolDescriptor(
            id=BUILTIN_EXTENDED_ID,
            title="Built-in pattern detector (extended rules)",
            description=(
                "Bundled lexical detector with extended rules: weak entropy "
                "sources, time values in any expression, unprotected "
                "selfdestruct and owner assignments, tx.origin authorization."
            ),
            image_default=NATIVE_IMAGE,
            command="(in-process)",
            parser_id="builtin",
            native=True,
        ),
    ]


def list_tools(registry_dir: str | Path) -> list[ToolDescriptor]:
    """Descriptors for every plugin directory, in alphabetical id order."""
    registry_dir = Path(registry_dir)
    if not registry_dir.is_dir():
        raise FileNotFoundError(f"tool registry directory not found: {registry_dir}")
    descriptors = []
    for plugin_dir in sorted(registry_dir.iterdir(), key=lambda p: p.name):
        if plugin_dir.is_dir() and (plugin_dir / "config.yaml").is_file():
            descriptors.append(load_tool_dir(plugin_dir))
    return descriptors


class Registry:
    """Immutable collection of tool descriptors addressable by id."""

    def __init__(self, descriptors: list[ToolDescriptor]):
        self._by_id = {d.id: d for d in sorted(descriptors, key=lambda d: d.id)}

    @classmethod
    def load(cls, registry_dir: str | Path, include_builtin: bool = True) -> "Registry":
        descriptors = list_tools(registry_dir)
        if include_builtin:
            present = {d.id for d in descriptors}
            descriptors.extend(d for d in builtin_descriptors() if d.id not in present)
        return cls(descriptors)

    def ids(self) -> list[str]:
        return list(self._by_id)

    def all(self) -> list[ToolDescriptor]:
        return list(self._by_id.values())

    def get(self, tool_id: str) -> ToolDescriptor:
        try:
            return self._by_id[tool_id]
        except KeyError:
            raise UnknownTool(tool_id, self.ids()) from None

    def info(self, tool_id: str) -> str:
        tool = self.get(tool_id)
        lines = [f"{tool.id}: {tool.title}"]
        if tool.description:
            lines.append(f"  {tool.description}")
        lines.append(f"  image: {tool.image_default}")
        if tool.image_solc_lt5:
            lines.append(f"  image (solc<5): {tool.image_solc_lt5}")
        if tool.output_file:
            lines.append(f"  output file: {tool.output_file}")
        return "\n".join(lines)


def bundled_registry_dir() -> Path:
    """The tool-plugin directory shipped inside the package."""
    return Path(str(resources.files("solsweep") / "config" / "tools"))


def default_registry(base_dir: str | Path | None = None) -> Registry:
    """Project-local ``config/tools`` when present, else the bundled plugins."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    local = base / "config" / "tools"
    registry_dir = local if local.is_dir() else bundled_registry_dir()
    return Registry.load(registry_dir)
