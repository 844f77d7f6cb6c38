# src/cache/manager.py
"""
캐시 관리자
채널 테이블을 위한 프로세스 로컬 LRU 캐싱
"""
import json
import hashlib
from typing import Optional, Any, Dict, Generic, TypeVar
from abc import ABC, abstractmethod
import logging

from cachetools import LRUCache

from ..config import get_settings
from ..monitoring import MetricsCollector

logger = logging.getLogger(__name__)

T = TypeVar('T')


class CacheBackend(ABC, Generic[T]):
    """캐시 백엔드 인터페이스"""

    @abstractmethod
    def get(self, key: str) -> Optional[T]:
        """캐시에서 값 가져오기"""
        pass

    @abstractmethod
    def set(self, key: str, value: T) -> bool:
        """캐시에 값 설정"""
        pass

    @abstractmethod
    def clear(self, pattern: Optional[str] = None) -> int:
        """캐시 클리어"""
        pass

    @abstractmethod
    def __len__(self) -> int:
        pass


class LocalCache(CacheBackend[Any]):
    """로컬 메모리 LRU 캐시 백엔드"""

    def __init__(self, max_size: int = 256):
        self.cache: LRUCache = LRUCache(maxsize=max_size)

    def get(self, key: str) -> Optional[Any]:
        return self.cache.get(key)

    def set(self, key: str, value: Any) -> bool:
        self.cache[key] = value
        return True

    def clear(self, pattern: Optional[str] = None) -> int:
        if pattern:
            keys_to_delete = [k for k in list(self.cache.keys()) if k.startswith(pattern)]
            for key in keys_to_delete:
                del self.cache[key]
            return len(keys_to_delete)
        count = len(self.cache)
        self.cache.clear()
        return count

    def __len__(self) -> int:
        return len(self.cache)


class CacheManager:
    """캐시 관리자 - 전략 패턴 사용"""

    def __init__(self, backend: Optional[CacheBackend] = None):
        self.settings = get_settings()
        self.backend = backend or LocalCache(max_size=self.settings.table_cache_size)
        self._stats = {
            'hits': 0,
            'misses': 0,
            'sets': 0
        }

    @staticmethod
    def make_key(**kwargs) -> str:
        """캐시 키 생성 (정렬된 JSON의 sha256)"""
        key_data = json.dumps(kwargs, sort_keys=True, default=str)
        key_hash = hashlib.sha256(key_data.encode()).hexdigest()[:24]

        source = kwargs.get('source', 'general')
        return f"{source}:{key_hash}"

    def get(self, key: str) -> Optional[Any]:
        """캐시에서 값 가져오기"""
        value = self.backend.get(key)
        if value is not None:
            self._stats['hits'] += 1
            MetricsCollector.record_cache_hit()
            logger.debug(f"캐시 히트: {key}")
        else:
            self._stats['misses'] += 1
            MetricsCollector.record_cache_miss()
            logger.debug(f"캐시 미스: {key}")
        return value

    def set(self, key: str, value: Any) -> bool:
        """캐시에 값 설정"""
        success = self.backend.set(key, value)
        if success:
            self._stats['sets'] += 1
            MetricsCollector.update_cache_size(len(self.backend))
        return success

    def clear(self, source: Optional[str] = None) -> int:
        """캐시 클리어"""
        pattern = f"{source}:" if source else None
        count = self.backend.clear(pattern)
        MetricsCollector.update_cache_size(len(self.backend))
        logger.debug(f"캐시 클리어됨: {count}개 항목 (소스: {source or '전체'})")
        return count

    def get_stats(self) -> Dict[str, Any]:
        """캐시 통계 가져오기"""
        total_requests = self._stats['hits'] + self._stats['misses']
        hit_rate = (self._stats['hits'] / total_requests * 100) if total_requests > 0 else 0

        return {
            **self._stats,
            'size': len(self.backend),
            'total_requests': total_requests,
            'hit_rate': round(hit_rate, 2)
        }


# 싱글톤 인스턴스
_cache_manager: Optional[CacheManager] = None


def get_cache_manager() -> CacheManager:
    """캐시 관리자 싱글톤 가져오기"""
    global _cache_manager

    if _cache_manager is None:
        _cache_manager = CacheManager()

    return _cache_manager


def reset_cache_manager():
    """캐시 관리자 초기화 (테스트용)"""
    global _cache_manager
    _cache_manager = None
