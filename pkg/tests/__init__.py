# tests/__init__.py
"""Tests for Unified Search MCP Server"""
