"""String constants and labels used throughout rpsurf.

This module defines the :class:`Labels` class holding the string constants used
as settings keys, surgery record kinds, brick kind tags and report keys. Keeping
them in one place keeps file formats, reports and the command line consistent.

Example:
    Using Labels for settings and record kinds::

        from rpsurf.labels import Labels
        from rpsurf.settings import Settings

        eps = Settings().get(Labels.EPS_COORD)
        if record.kind == Labels.CUBE_FLIP:
            ...
"""


class Labels:
    """String constants for settings keys, record kinds and file tags.

    Attributes:
        EPS_COORD (str): Coordinate tolerance key ('geometry.eps_coord').
        KEY_QUANTUM (str): Grid step used to hash coordinates ('geometry.key_quantum').
        MAX_CUT_RETRIES (str): Bound on cut-cycle enlargements ('surgery.max_cut_retries').
        DODECAHEDRON (str): Brick kind tag ('dodecahedron').
        CUBE (str): Brick kind tag ('cube').
        OCTAGONAL_PRISM (str): Brick kind tag ('octagonal-prism').

    Note:
        This is a regular class (not an enum); values are plain strings so they
        can be written to YAML and compared with command line arguments.
    """

    # Settings keys
    EPS_COORD = "geometry.eps_coord"
    KEY_QUANTUM = "geometry.key_quantum"
    MAX_CUT_RETRIES = "surgery.max_cut_retries"
    EXHAUSTIVE_FACE_LIMIT = "bands.exhaustive_face_limit"
    RESTRICT_CANDIDATES = "bands.restrict_candidates"
    TORUS_SEARCH_BUDGET = "generators.torus_search_budget"
    TORUS_MAX_N = "generators.torus_max_n"
    TORUS_KNOWN_LENGTHS = "generators.torus_known_lengths"
    TORUS_TRIAL_BUDGET = "generators.torus_trial_budget"
    MAX_ITERATIONS = "decompose.max_iterations"
    FLOAT_DIGITS = "io.float_digits"
    LOG_LEVEL = "logging.level"
    SINGLETON = "settings.singleton"

    # Surgery record kinds
    POLYHEDRAL = "polyhedral"
    BAND = "band"
    OCTAGON_REMOVAL = "octagon-removal"
    PRISM_REMOVAL = "prism-removal"
    CUBE_REMOVAL = "cube-removal"
    CUBE_FLIP = "cube-flip"
    PRISM_FLIP = "prism-flip"
    DANGLING_CLEANUP = "dangling-cleanup"
    DODECAHEDRON_REMOVAL = "dodecahedron-removal"
    RING_OPENING = "ring-opening"
    BASE_CASE = "base-case"

    # Brick kinds
    DODECAHEDRON = "dodecahedron"
    CUBE = "cube"
    OCTAGONAL_PRISM = "octagonal-prism"

    # Certificate / report keys
    BRICKS = "bricks"
    GLUINGS = "gluings"
    KIND = "kind"
    ROTATION = "rotation"
    TRANSLATION = "translation"
    PAIRS = "pairs"

    # Curvature signs
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"

    @classmethod
    def brick_kinds(cls) -> tuple[str, str, str]:
        """Return the brick kind tags accepted in certificates."""
        return (cls.DODECAHEDRON, cls.CUBE, cls.OCTAGONAL_PRISM)
