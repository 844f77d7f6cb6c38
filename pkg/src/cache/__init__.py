"""
캐싱 시스템
"""
from .manager import (
    CacheBackend,
    LocalCache,
    CacheManager,
    get_cache_manager,
    reset_cache_manager
)
from .decorators import (
    cached,
    invalidate_cache
)

__all__ = [
    # Manager
    'CacheBackend',
    'LocalCache',
    'CacheManager',
    'get_cache_manager',
    'reset_cache_manager',

    # Decorators
    'cached',
    'invalidate_cache',
]
