from dotenv import load_dotenv
import os
import logging

load_dotenv()

class Config:
    # Rank guards
    MAX_RANK = int(os.getenv("FUSION_FORGE_MAX_RANK", 7))
    EXTENDED_RANK = int(os.getenv("FUSION_FORGE_EXTENDED_RANK", 8))

    # Brute-force bounds
    MAX_CANON_ORDER = int(os.getenv("FUSION_FORGE_MAX_CANON_ORDER", 8))
    MAX_DIGRAPH_ORDER = int(os.getenv("FUSION_FORGE_MAX_DIGRAPH_ORDER", 7))  # float64 codes stay exact up to 7
    ORACLE_MAX_RANK = int(os.getenv("FUSION_FORGE_ORACLE_MAX_RANK", 5))
    MATCHING_MAX_VERTICES = int(os.getenv("FUSION_FORGE_MATCHING_MAX_VERTICES", 8))

    # Frobenius-Perron power iteration
    FP_TOL = float(os.getenv("FUSION_FORGE_FP_TOL", 1e-9))
    FP_MAX_ITER = int(os.getenv("FUSION_FORGE_FP_MAX_ITER", 10**6))

    DEFAULT_JOBS = int(os.getenv("FUSION_FORGE_JOBS", 1))
    LOG_LEVEL = os.getenv("FUSION_FORGE_LOG_LEVEL", "INFO")

    @classmethod
    def rank_limit(cls, extended: bool = False) -> int:
        """Largest rank a search may run at"""
        return cls.EXTENDED_RANK if extended else cls.MAX_RANK

    @classmethod
    def validate_config(cls):
        """Validate configuration during startup"""
        if cls.EXTENDED_RANK < cls.MAX_RANK:
            logging.warning(f"Extended rank {cls.EXTENDED_RANK} is below the normal rank guard {cls.MAX_RANK}")
        if cls.MAX_DIGRAPH_ORDER > 7:
            logging.warning(f"Digraph order {cls.MAX_DIGRAPH_ORDER} exceeds the exact float64 code range, generation may collide")
        if cls.EXTENDED_RANK - 1 > cls.MAX_DIGRAPH_ORDER:
            logging.warning(f"Extended rank {cls.EXTENDED_RANK} needs digraphs of order {cls.EXTENDED_RANK - 1}")
        if cls.FP_TOL <= 0:
            logging.warning(f"Non-positive FP tolerance {cls.FP_TOL}")
        logging.info(f"Rank guard {cls.MAX_RANK} (extended {cls.EXTENDED_RANK}), canonical order bound {cls.MAX_CANON_ORDER}")
