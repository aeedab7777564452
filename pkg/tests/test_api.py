"""API endpoint tests"""
import math

from tests.base_test import BaseTestCase


class TestHealthEndpoint(BaseTestCase):
    """Tests for health check endpoint"""

    async def test_health_check(self):
        """Test health endpoint returns 200"""
        response = await self.client.get('/api/v1/health')
        self.assertEqual(response.status_code, 200)

        data = response.json()
        self.assertEqual(data['status'], 'healthy')
        self.assertIn('message', data)


class TestPrimesEndpoint(BaseTestCase):
    """Tests for the sieve endpoint"""

    async def test_primes_one_mod_four(self):
        data = await self.get_json('/primes', k=4, l=1, x=50)
        self.assertEqual(data['primes'], [5, 13, 17, 29, 37, 41])
        self.assertEqual(data['count'], 6)

    async def test_residue_is_reduced(self):
        data = await self.get_json('/primes', k=4, l=5, x=20)
        self.assertEqual(data['l'], 1)

    async def test_non_coprime_residue(self):
        data = await self.get_json('/primes', expected_status=400, k=6, l=4, x=100)
        self.assertIn('gcd', data['error'])

    async def test_missing_parameter(self):
        """Schema validation rejects a request without x"""
        response = await self.client.get('/api/v1/primes', params={'k': 4, 'l': 1})
        self.assertEqual(response.status_code, 400)

    async def test_bound_below_two(self):
        response = await self.client.get('/api/v1/primes', params={'k': 4, 'l': 1, 'x': 1})
        self.assertEqual(response.status_code, 400)


class TestSumEndpoints(BaseTestCase):
    """Tests for sum, predict and compare"""

    async def test_sum_of_ones(self):
        data = await self.get_json('/sum', f='1', k=1, l=0, x=100)
        self.assertEqual((data['exact'], data['abel']), (25, 25))
        self.assertLessEqual(data['abs_diff'], 1e-9)

    async def test_bad_expression(self):
        data = await self.get_json('/sum', expected_status=400, f='log(', k=1, l=0, x=100)
        self.assertIn('offset 4', data['error'])

    async def test_overflow_is_unprocessable(self):
        await self.get_json('/sum', expected_status=422, f='2^t', k=1, l=0, x=1e6)

    async def test_predict(self):
        data = await self.get_json('/predict', f='1', model='grh', k=1, l=0, x=10000)
        self.assertEqual(data['model'], 'grh')
        self.assertAlmostEqual(data['envelope'], 100 * math.log(1e4), places=6)

    async def test_predict_rejects_unknown_model(self):
        response = await self.client.get(
            '/api/v1/predict', params={'f': '1', 'model': 'riemann', 'k': 1, 'l': 0, 'x': 100}
        )
        self.assertEqual(response.status_code, 400)

    async def test_compare(self):
        data = await self.get_json(
            '/compare', f='log(t)', model='pnt', k=4, l=1, xMin=1000, xMax=1000000, xPoints=4
        )
        self.assertEqual(data['columns'], ['x', 'exact', 'main', 'ratio', 'normalized_remainder'])
        self.assertEqual(len(data['rows']), 4)
        self.assertLessEqual(abs(data['rows'][-1][3] - 1), 0.02)

    async def test_compare_infinite_ratio_is_null(self):
        data = await self.get_json('/compare', f='t', model='pnt', k=1, l=0, xMin=2, xMax=2, xPoints=1)
        self.assertIsNone(data['rows'][0][3])

    async def test_bad_theta(self):
        await self.get_json('/predict', expected_status=400, f='1', model='vinogradov', k=1, l=0, x=100, theta=2)


class TestConditionsEndpoint(BaseTestCase):
    """Tests for the condition report"""

    async def test_report(self):
        data = await self.get_json('/conditions', f='t^2', k=4, l=1)
        self.assertEqual(set(data), {'f', 'k', 'l', 'sufficient_ratio', 'divergence', 'a33', 'necessary'})
        self.assertEqual(data['a33']['verdict'], 'nonzero_limit')
        self.assertEqual(data['sufficient_ratio']['verdict'], 'away_from_1')

    async def test_with_ratio(self):
        data = await self.get_json('/conditions', f='log(t)', k=1, l=0, withRatio='true')
        self.assertIn('ratio', data)
