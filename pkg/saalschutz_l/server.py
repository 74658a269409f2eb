#!/usr/bin/env python3
"""
saalschutz-l MCP Server
MCP (Model Context Protocol) server exposing the L function, its invariance
group and the verification suites
"""

import asyncio
import json
import logging
from typing import Any, Dict, List, Sequence

import mcp.types as types
from mcp.server import Server
from mcp.server.lowlevel.server import NotificationOptions
from mcp.server.models import InitializationOptions
from mcp.server.stdio import stdio_server
from mcp.types import Resource, Tool

from . import __version__
from .cli import cosets_payload, evaluate_payload, group_summary
from .group_engine import element_for_word
from .l_function import METHODS
from .relation_catalog import export_catalog, format_relation, relation_for
from .schemas import SampleConstraints
from .verifier import CLASSICAL_SUITES, report_to_json, run_classical_suite, select_elements, verify_invariance

logger = logging.getLogger("saalschutz-l")

SERVER_NAME = "saalschutz-l"
GROUP_URI = "saalschutz-l://group"
CATALOG_URI = "saalschutz-l://catalog"


class SaalschutzMCP:
    """MCP Server for the L function and its W(D5) relations"""

    def __init__(self):
        self.server = Server(SERVER_NAME)

        # Register tools
        self._register_tools()

        # Register resources
        self._register_resources()

    def _register_tools(self):
        """Register all MCP tools"""

        @self.server.list_tools()
        async def handle_list_tools() -> List[Tool]:
            return [
                Tool(
                    name="evaluate_l",
                    description="Evaluate L(a,b,c,d;e;f,g) at a point with e+f+g-a-b-c-d = 1",
                    inputSchema={
                        "type": "object",
                        "properties": {
                            "params": {
                                "type": "string",
                                "description": "Seven comma-separated values a,b,c,d,e,f,g; complex as 0.3+0.2i",
                            },
                            "method": {
                                "type": "string",
                                "enum": list(METHODS),
                                "default": "auto",
                            },
                        },
                        "required": ["params"],
                    },
                ),
                Tool(
                    name="group_info",
                    description="Order of the invariance group, size of its permutation subgroup and the Coxeter check",
                    inputSchema={"type": "object", "properties": {}},
                ),
                Tool(
                    name="double_cosets",
                    description="The six double cosets with sizes and representative words",
                    inputSchema={"type": "object", "properties": {}},
                ),
                Tool(
                    name="relation_for_word",
                    description="The relation L(x) = L(Mx) for a word such as \"(34)A\" or \"((123)(67)A)^2\"",
                    inputSchema={
                        "type": "object",
                        "properties": {"word": {"type": "string", "description": "Word in (12),(23),(34),(67),(123),A"}},
                        "required": ["word"],
                    },
                ),
                Tool(
                    name="verify_relations",
                    description="Check L(p) = L(Mp) at random points for a set of group elements",
                    inputSchema={
                        "type": "object",
                        "properties": {
                            "samples": {"type": "integer", "default": 3},
                            "elements": {"type": "string", "description": "all, reps or random:K", "default": "reps"},
                            "tol": {"type": "number", "default": 1e-6},
                            "seed": {"type": "integer", "default": 0},
                        },
                    },
                ),
                Tool(
                    name="verify_classical",
                    description="Run the Thomae, Bailey, Barnes lemma and gamma kernel checks",
                    inputSchema={
                        "type": "object",
                        "properties": {
                            "which": {"type": "string", "enum": list(CLASSICAL_SUITES), "default": "all"},
                            "seed": {"type": "integer", "default": 0},
                        },
                    },
                ),
            ]

        @self.server.call_tool()
        async def handle_call_tool(name: str, arguments: Dict[str, Any]) -> Sequence[types.TextContent]:
            arguments = arguments or {}
            try:
                text = await self.call(name, arguments)
                return [types.TextContent(type="text", text=text)]
            except Exception as e:
                error_msg = f"Error calling {name}: {str(e)}"
                logger.error(error_msg)
                return [types.TextContent(type="text", text=error_msg)]

    def _register_resources(self):

        @self.server.list_resources()
        async def handle_list_resources() -> List[Resource]:
            return [
                Resource(
                    uri=GROUP_URI,
                    name="Invariance Group",
                    description="Group order, permutation subgroup size and Coxeter status",
                    mimeType="application/json",
                ),
                Resource(
                    uri=CATALOG_URI,
                    name="Relation Catalog",
                    description="All 1920 relations as JSON",
                    mimeType="application/json",
                ),
            ]

        @self.server.read_resource()
        async def handle_read_resource(uri) -> str:
            return await self.read(str(uri))

    async def call(self, name: str, arguments: Dict[str, Any]) -> str:
        """Run one tool; CPU-bound work goes to a worker thread"""
        if name == "evaluate_l":
            payload = await asyncio.to_thread(evaluate_payload, arguments["params"], arguments.get("method", "auto"))
            return json.dumps(payload, indent=2)

        elif name == "group_info":
            return json.dumps(await asyncio.to_thread(group_summary), indent=2)

        elif name == "double_cosets":
            return json.dumps(await asyncio.to_thread(cosets_payload), indent=2)

        elif name == "relation_for_word":
            return await asyncio.to_thread(self._relation_for_word, arguments["word"])

        elif name == "verify_relations":
            report = await asyncio.to_thread(self._verify_relations, **arguments)
            return report_to_json(report)

        elif name == "verify_classical":
            report = await asyncio.to_thread(
                run_classical_suite,
                arguments.get("which", "all"),
                arguments.get("seed", 0),
            )
            return report_to_json(report)

        else:
            raise ValueError(f"Unknown tool: {name}")

    async def read(self, uri: str) -> str:
        if uri == GROUP_URI:
            return json.dumps(await asyncio.to_thread(group_summary), indent=2)
        elif uri == CATALOG_URI:
            return await asyncio.to_thread(export_catalog, "json")
        else:
            raise ValueError(f"Unknown resource: {uri}")

    @staticmethod
    def _relation_for_word(word: str) -> str:
        relation = relation_for(element_for_word(word))
        record = relation.to_record()
        record["relation"] = format_relation(relation)
        return json.dumps(record, indent=2)

    @staticmethod
    def _verify_relations(samples: int = 3, elements: str = "reps", tol: float = 1e-6, seed: int = 0):
        constraints = SampleConstraints(seed=seed)
        return verify_invariance(select_elements(elements, seed), samples, tol, constraints)


async def main():
    """Main entry point for the MCP server"""
    logging.basicConfig(level=logging.INFO)
    mcp_server = SaalschutzMCP()
    logger.info("starting %s %s on stdio", SERVER_NAME, __version__)

    # Run the server
    async with stdio_server() as (read_stream, write_stream):
        await mcp_server.server.run(
            read_stream,
            write_stream,
            InitializationOptions(
                server_name=SERVER_NAME,
                server_version=__version__,
                capabilities=mcp_server.server.get_capabilities(
                    notification_options=NotificationOptions(),
                    experimental_capabilities={},
                ),
            ),
        )


if __name__ == "__main__":
    asyncio.run(main())
