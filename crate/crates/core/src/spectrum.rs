//! Length-angle spectrum (in progress).
