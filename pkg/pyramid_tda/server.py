"""MCP tool server exposing barcode computation, conversion, distances and projections over stdio.

Tools never raise; failures come back as ``"Error: <Class>: <message>"`` text.
"""
import argparse
import logging

from mcp.server.fastmcp import FastMCP

from .cli import barcode_distance, compute_barcode, convert_barcode, format_number, project_document
from .config import get_settings
from .errors import TDAError
from .io import dump_barcode, load_barcode, load_complex

logger = logging.getLogger(__name__)

# Initialize MCP Server; main() renames it from TDA_SERVER_NAME
mcp = FastMCP("BarcodeServer")


def _error(e: Exception) -> str:
    if not isinstance(e, TDAError):
        logger.exception("tool failed")
    return f"Error: {type(e).__name__}: {e}"


@mcp.tool(name="compute_barcode")
async def compute_barcode_tool(
    complex_json: str,
    mode: str = "extended",
    degree: int | None = None,
    perturb: bool = False,
    via_pyramid: bool = False,
) -> str:
    """
    Compute the barcode of a simplicial complex with a vertex function.
    :param complex_json: complex file contents (vertices with values, simplices)
    :param mode: ordinary, extended, lzz or zigzag
    :param degree: homological degree; all degrees when omitted
    :param perturb: break ties between equal vertex values
    :param via_pyramid: compute the levelsets barcode through the extended barcode
    :return: barcode file JSON, or an error message
    """
    try:
        bc = compute_barcode(load_complex(complex_json), mode, degree, perturb, via_pyramid)
        return dump_barcode(bc)
    except Exception as e:
        return _error(e)


@mcp.tool(name="convert_barcode")
async def convert_barcode_tool(barcode_json: str, to: str) -> str:
    """
    Convert a barcode file between the lzz, extended, blocks and strip flavors.
    :param barcode_json: barcode file contents
    :param to: target flavor
    :return: converted barcode file JSON, or an error message
    """
    try:
        return dump_barcode(convert_barcode(load_barcode(barcode_json), to))
    except Exception as e:
        return _error(e)


@mcp.tool(name="barcode_distance")
async def barcode_distance_tool(a_json: str, b_json: str, kind: str = "blocks", degree: int | None = None) -> str:
    """
    Bottleneck distance between two barcode files of the same flavor.
    :param a_json: first barcode file contents
    :param b_json: second barcode file contents
    :param kind: blocks or strip
    :param degree: restrict the block distance to one degree
    :return: the distance with 12 significant digits ("inf" when unbounded), or an error message
    """
    try:
        return format_number(barcode_distance(load_barcode(a_json), load_barcode(b_json), kind, degree))
    except Exception as e:
        return _error(e)


@mcp.tool(name="project_complex")
async def project_complex_tool(complex_json: str, directions: str = "8") -> str:
    """
    Extended barcodes of height functions along several directions.
    :param complex_json: complex file contents with vertex coordinates
    :param directions: a count, or explicit vectors such as "1,0;0,1"
    :return: JSON with one barcode per direction, or an error message
    """
    try:
        return project_document(load_complex(complex_json), directions)
    except Exception as e:
        return _error(e)


def main() -> None:
    settings = get_settings()
    mcp._mcp_server.name = settings.server_name
    parser = argparse.ArgumentParser(description="Barcode MCP Server (stdio)")
    parser.add_argument("--log-level", default=settings.log_level, help=f"logging level (default: {settings.log_level})")
    args = parser.parse_args()
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    logger.info("starting %s on stdio", settings.server_name)
    mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
