"""Base test case for the HTTP tests"""
import unittest
import sys
import os
from httpx import AsyncClient, ASGITransport

# Add parent directory to path so we can import app
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import app as asgi_app


class BaseTestCase(unittest.IsolatedAsyncioTestCase):
    """Base test case that all endpoint test classes inherit from

    Uses IsolatedAsyncioTestCase for async test support.
    """

    async def asyncSetUp(self):
        """Set up async test client for each test"""
        self.client = AsyncClient(
            transport=ASGITransport(app=asgi_app),
            base_url="http://test",
            timeout=120.0
        )

    async def asyncTearDown(self):
        await self.client.aclose()

    async def get_json(self, path, expected_status=200, **params):
        """GET path with query params, assert the status and return the body"""
        response = await self.client.get(f'/api/v1{path}', params=params)
        self.assertEqual(response.status_code, expected_status, response.text)
        return response.json()
