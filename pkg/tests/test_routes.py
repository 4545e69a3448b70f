import pytest

from app import create_app

EXAMPLE = {'n': 6, 'relations': [[1, 3], [2, 3], [3, 4], [3, 5], [3, 6]]}


@pytest.fixture
def client():
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()


def test_index_endpoint(client):
    resp = client.post('/api/index', json={'poset': EXAMPLE})
    assert resp.status_code == 200
    data = resp.get_json()
    assert data['oracle'] == 7
    assert data['formula']['index'] == 7
    assert data['verdict'] == 'AGREE'
    assert data['seed'] == 0
    assert data['frobenius'] is False


def test_index_from_text(client):
    resp = client.post('/api/index', json={'text': 'n 6\n1,2 < 3 < 4,5,6', 'variant': 'solvable'})
    assert resp.get_json()['formula']['index'] == 3


def test_index_rejects_bad_options(client):
    resp = client.post('/api/index', json={'poset': EXAMPLE, 'method': 'numeric'})
    assert resp.status_code == 400
    resp = client.post('/api/index', json={'poset': EXAMPLE, 'trials': 0})
    assert resp.status_code == 400
    resp = client.post('/api/index', json={'poset': EXAMPLE, 'seed': -3})
    assert resp.status_code == 200
    assert resp.get_json()['seed'] == -3


def test_rank_endpoint(client):
    resp = client.post('/api/index/rank', json={'poset': EXAMPLE, 'method': 'exact'})
    assert resp.get_json()['rank'] == 4


def test_matrix_endpoint(client):
    data = client.post('/api/index/matrix', json={'poset': EXAMPLE, 'ordering': 'block'}).get_json()
    assert data['row_labels'][0] == [1, 3]
    assert data['col_labels'][0] == [3, 4]
    resp = client.post('/api/index/matrix', json={'poset': EXAMPLE, 'format': 'text', 'nonzero': True})
    assert resp.mimetype == 'text/plain'
    assert 'E_{1,4}' in resp.get_data(as_text=True)


def test_poset_stats_and_profiles(client):
    data = client.post('/api/poset/stats', json={'poset': EXAMPLE}).get_json()
    assert data['rel_count'] == 11
    assert data['interior'] == [3]
    profiles = client.post('/api/poset/up-down', json={'poset': EXAMPLE, 'elements': [3]}).get_json()
    assert profiles == [{
        'p': 3, 'd': 2, 'u': 3, 'd_e': 2, 'u_e': 3,
        'b_lower': [[1, 3], [2, 3]],
        'b_upper': [[3, 4], [3, 5], [3, 6]],
    }]


def test_middle_sections_and_hasse(client):
    data = client.post('/api/poset/middle-sections', json={'poset': EXAMPLE}).get_json()
    assert data == {'height': 2, 'sections': [[3]]}
    resp = client.post('/api/poset/hasse', json={'poset': EXAMPLE})
    assert resp.mimetype == 'text/vnd.graphviz'
    assert resp.get_data(as_text=True).startswith('digraph P {')


def test_reduce_endpoint(client):
    poset = {'n': 7, 'relations': [[1, 3], [2, 3], [3, 5], [5, 6], [5, 7], [2, 4], [4, 7]]}
    data = client.post('/api/reduce', json={'poset': poset, 'verify': True, 'dot': True}).get_json()
    assert data['final_height'] == 2
    assert data['checks'][0]['passed'] is True
    assert len(data['dot']) == 1


def test_sweep_endpoint(client):
    data = client.post('/api/sweep', json={'n': 3}).get_json()
    assert data['poset_count'] == 7
    assert data['passed'] is True
    assert client.post('/api/sweep', json={'n': 6}).status_code == 400
    assert client.post('/api/sweep', json={'n': 3, 'checks': ['bogus']}).status_code == 400


def test_poset_errors_are_400(client):
    resp = client.post('/api/index', json={'poset': {'n': 3, 'relations': [[3, 1]]}})
    assert resp.status_code == 400
    assert 'error' in resp.get_json()
    assert client.post('/api/index', json={}).status_code == 400
    assert client.post('/api/poset/stats', data='not json').status_code == 400


def test_poset_size_limit(client):
    resp = client.post('/api/poset/stats', json={'poset': {'n': 13, 'relations': []}})
    assert resp.status_code == 400


def test_system_status(client):
    data = client.get('/api/system/status').get_json()
    assert data['kernel']['backend'] in ('numba', 'python')
    assert data['limits']['max_sweep_n'] == 5


def test_not_found(client):
    assert client.get('/api/nothing').status_code == 404
