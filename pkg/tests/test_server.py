"""Tests for MCP server functionality."""

from unittest.mock import patch

from pointed_mobius import server
from pointed_mobius.server import main, mcp


def call(tool, *args, **kwargs):
    """Invoke the function behind a registered tool."""
    return getattr(tool, "fn", tool)(*args, **kwargs)


class TestFastMCPServer:
    """Test cases for FastMCP server setup."""

    def test_server_initialization(self):
        """Test FastMCP server initialization."""
        assert mcp is not None
        assert mcp.name == "Pointed Partition Mobius"

    def test_tools_registered(self):
        """Test that every tool is a registered FastMCP tool with a name."""
        tools = [
            server.mobius_of_filter,
            server.descent_beta,
            server.knapsack_certificate,
            server.knapsack_census,
            server.knapsack_vset,
            server.verify_suites,
        ]
        for tool in tools:
            assert tool is not None, f"Tool {tool} is None"
            assert hasattr(tool, "name"), f"Tool {tool} doesn't have name attribute"


class TestTools:
    """Test cases for the text returned by each tool."""

    def test_mobius_of_filter(self):
        """Test the report for the at-most-four-parts filter of n = 4."""
        result = call(server.mobius_of_filter, 4, ["2,1,1|0", "1,1,1|1"])
        assert "Möbius function of the filter (n = 4)" in result
        assert ": 24" in result
        assert "✅" in result

    def test_mobius_of_filter_error(self):
        """Test that a malformed generator returns an error report."""
        result = call(server.mobius_of_filter, 4, ["2,1,1"])
        assert "❌ Error" in result
        assert "Troubleshooting:" in result

    def test_descent_beta(self):
        """Test beta of an alternating composition."""
        assert call(server.descent_beta, "2,2,2|1") == "beta(2,2,2|1) = 272\n"
        assert "❌ Error" in call(server.descent_beta, "2,x|1")

    def test_knapsack_certificate(self):
        """Test recognition in both outcomes."""
        assert "verdict      : knapsack" in call(server.knapsack_certificate, "1,1,1,4")
        assert "collision: 3 = 2+1" in call(server.knapsack_certificate, "1,2,3")

    def test_knapsack_census(self):
        """Test the census table and its bound."""
        assert "Knapsack partitions of 5" in call(server.knapsack_census, 5)
        assert "❌ Error" in call(server.knapsack_census, 41)

    def test_knapsack_vset(self):
        """Test the V listing and a non-knapsack input."""
        assert "3 composition(s)" in call(server.knapsack_vset, "1,2", 0)
        assert "❌ Error" in call(server.knapsack_vset, "1,2,3", 0)

    def test_verify_suites(self):
        """Test a small verification run."""
        with patch("pointed_mobius.server.run_verification", wraps=server.run_verification) as mock_run:
            result = call(server.verify_suites, 3)
        mock_run.assert_called_once_with(None, 3, 0)
        assert "✅ all suites passed" in result


class TestMainFunction:
    """Test cases for main function."""

    def test_main_function(self):
        """Test main entry point function."""
        with patch("pointed_mobius.server.mcp.run") as mock_run:
            with patch("pointed_mobius.server.logging.basicConfig") as mock_logging:
                main()

                mock_logging.assert_called_once_with(level=20)  # logging.INFO = 20
                mock_run.assert_called_once()
