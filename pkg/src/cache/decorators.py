# src/cache/decorators.py
"""
캐시 데코레이터
함수 결과를 자동으로 캐싱하는 데코레이터
"""
import functools
from typing import Optional, Callable, Dict, Any
import logging

from .manager import get_cache_manager

logger = logging.getLogger(__name__)


def cached(
    key_builder: Callable[..., Dict[str, Any]],
    source: Optional[str] = None
):
    """
    캐시 데코레이터

    Args:
        key_builder: 호출 인자로부터 키 재료(dict)를 만드는 함수.
            결과에 영향을 주는 입력만 포함해야 함
        source: 캐시 소스 (키 프리픽스, 클리어 단위)
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            cache_manager = get_cache_manager()

            cache_key = cache_manager.make_key(
                func=func.__qualname__,
                source=source or func.__module__,
                **key_builder(*args, **kwargs)
            )

            cached_value = cache_manager.get(cache_key)
            if cached_value is not None:
                logger.debug(f"캐시에서 반환: {func.__name__}")
                return cached_value

            result = func(*args, **kwargs)
            cache_manager.set(cache_key, result)
            return result

        wrapper.cache_source = source or func.__module__  # type: ignore[attr-defined]
        return wrapper

    return decorator


def invalidate_cache(source: Optional[str] = None) -> int:
    """특정 소스의 캐시를 무효화 (None이면 전체)"""
    count = get_cache_manager().clear(source=source)
    logger.info(f"캐시 무효화됨: {source or '전체'}")
    return count
