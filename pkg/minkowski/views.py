import json
import logging

from django.core.paginator import Paginator
from django.forms import ValidationError
from django.http import JsonResponse
from django.views.decorators.csrf import csrf_exempt
from django.views.decorators.http import require_http_methods

from .applications import config
from .applications.body_io import parse_body
from .applications.collision_query import proximity_query
from .applications.compute_limiter import get_compute_limiter
from .applications.errors import BodyFormatError, GeometryError
from .applications.minkowski_cf import MinkSumQuery, boundary_cloud
from .applications.model_methods import RunManifestMethods
from .applications.validation import validate_query
from .forms import CollideForm, GridForm, MinkSumForm
from .models import RunManifest
from .schema import AboutData, AboutResponse, PointCloudData, ProximityData, RunsListData

logger = logging.getLogger(__name__)


def _error(message, status, **extra):
    return JsonResponse({'success': False, 'error': message, **extra}, status=status)


def _limited(request, compute):
    """
    Run compute(data) for a JSON body under the compute limiter.

    Answers 429 when every slot is taken, 400 for bad input and 500 for
    anything unexpected.
    """
    with get_compute_limiter().slot() as admitted:
        if not admitted:
            return _error('Too many concurrent computations. Try again shortly.', 429)
        try:
            data = json.loads(request.body)
            if not isinstance(data, dict):
                return _error('Expected a JSON object', 400)
            return compute(data)
        except json.JSONDecodeError:
            return _error('Invalid JSON data', 400)
        except BodyFormatError as e:
            return _error(str(e), 400, field=e.field)
        except ValidationError as e:
            return _error(' '.join(e.messages), 400)
        except GeometryError as e:
            return _error(str(e), 400)
        except Exception as e:
            logger.exception("computation failed")
            return _error(str(e), 500)


def _query_from(data, mode='contact'):
    body1 = parse_body(data.get('body1'), prefix='body1')
    body2 = parse_body(data.get('body2'), prefix='body2')
    return MinkSumQuery(body1, body2, mode)


@csrf_exempt
@require_http_methods(["POST"])
def minksum_api(request):
    """API endpoint computing a closed-form boundary cloud"""
    def compute(data):
        form = MinkSumForm({'grid': data.get('grid'), 'mode': data.get('mode')})
        if not form.is_valid():
            return JsonResponse({'success': False, 'errors': form.errors.get_json_data()}, status=400)
        query = _query_from(data, form.cleaned_data['mode'])
        grid = form.check_grid_for(query.dim)
        cloud = boundary_cloud(query, grid, workers=config.threads())
        payload = PointCloudData(dim=query.dim, mode=query.mode,
                                 params=cloud.params.tolist(), points=cloud.points.tolist())
        return JsonResponse({'success': True, 'cloud': payload.model_dump()})

    return _limited(request, compute)


@csrf_exempt
@require_http_methods(["POST"])
def validate_api(request):
    """API endpoint running the kissing and support checks on a body pair"""
    def compute(data):
        form = GridForm({'grid': data.get('grid')})
        if not form.is_valid():
            return JsonResponse({'success': False, 'errors': form.errors.get_json_data()}, status=400)
        query = _query_from(data)
        grid = form.check_grid_for(query.dim)
        result = validate_query(query, grid, workers=config.threads())
        return JsonResponse({'success': True, 'validation': result.model_dump()})

    return _limited(request, compute)


@csrf_exempt
@require_http_methods(["POST"])
def collide_api(request):
    """API endpoint for a proximity query between two bodies"""
    def compute(data):
        form = CollideForm({'method': data.get('method')})
        if not form.is_valid():
            return JsonResponse({'success': False, 'errors': form.errors.get_json_data()}, status=400)
        query = _query_from(data)
        result = proximity_query(query, form.cleaned_data['method'], config.solver_config(),
                                 touch_tol=config.touch_tol())
        return JsonResponse({'success': True, 'result': ProximityData(**result.to_json_dict()).model_dump()})

    return _limited(request, compute)


@require_http_methods(["GET"])
def runs_api(request):
    """API endpoint listing recorded command runs with pagination"""
    page = request.GET.get('page', 1)
    per_page = request.GET.get('per_page', 20)

    paginator = Paginator(RunManifest.objects.all(), per_page)
    page_obj = paginator.get_page(page)

    data = RunsListData(
        runs=[RunManifestMethods.to_data(run) for run in page_obj],
        has_next=page_obj.has_next(),
        has_previous=page_obj.has_previous(),
        current_page=page_obj.number,
        total_pages=paginator.num_pages,
    )
    return JsonResponse(data.model_dump())


@require_http_methods(["GET"])
def about_api(request):
    """API endpoint for about information"""
    about = AboutResponse(about=AboutData(
        name='minksum',
        description='Closed-form Minkowski sums of superquadrics and ellipsoids, '
                    'with verification oracles, proximity queries and C-obstacle slices.',
        features=[
            'Boundary clouds of B1 + B2 and B1 + (-B2) for 2D and 3D superquadrics',
            'Linearly transformed bodies (rotation, shear, scaling)',
            'Kissing-point and support-function validation',
            'Separation distance and witness points by three methods',
            'C-obstacle slices over sampled robot orientations',
        ],
        version='1.0.0',
    ))
    return JsonResponse(about.model_dump())
