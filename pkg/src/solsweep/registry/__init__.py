"""Declarative analyzer plugins and compiler-version-aware image selection."""

from solsweep.registry.descriptor import (
    ConfigError,
    ToolDescriptor,
    load_tool_config,
    select_image,
)
from solsweep.registry.registry import (
    BUILTIN_BASE_ID,
    BUILTIN_EXTENDED_ID,
    Registry,
    UnknownTool,
    builtin_descriptors,
    bundled_registry_dir,
    default_registry,
    list_tools,
)

__all__ = [
    "ConfigError",
    "ToolDescriptor",
    "load_tool_config",
    "select_image",
    "BUILTIN_BASE_ID",
    "BUILTIN_EXTENDED_ID",
    "Registry",
    "UnknownTool",
    "builtin_descriptors",
    "bundled_registry_dir",
    "default_registry",
    "list_tools",
]
