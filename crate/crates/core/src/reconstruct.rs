//! Rigidity pipelines (in progress).
