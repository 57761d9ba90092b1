"""Infrastructure Persistence - SystemFile codec, file repository and report writer"""
from .report_writer import bellman_report_document, provenance, render_json, result_document, write_document
from .system_file_codec import SystemFileError, decode_system, encode_system, system_to_document

__all__ = [
    "SystemFileError",
    "bellman_report_document",
    "decode_system",
    "encode_system",
    "provenance",
    "render_json",
    "result_document",
    "system_to_document",
    "write_document",
]
