#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Encoding and decoding of protocol frames.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import io

from nti.gridemail.protocol.frames import FRAME_TYPES

from nti.gridemail.protocol.interfaces import ProtocolViolation

CRLF = b'\r\n'

#: Longest accepted line, terminator excluded
MAX_LINE = 65536

#: Largest accepted body
MAX_BODY = 16 * 1024 * 1024

logger = __import__('logging').getLogger(__name__)


def encode_frame(frame):
    """
    The wire bytes of ``frame``.
    """
    words = (frame.verb,) + tuple(frame.arguments())
    line = u' '.join(words).encode('utf-8') + CRLF
    if frame.has_body:
        return line + frame.body
    return line


def _split(text):
    verb, _, rest = text.partition(' ')
    try:
        factory = FRAME_TYPES[verb]
    except KeyError:
        raise ProtocolViolation("Unknown verb %r" % (verb[:32],))
    if not rest:
        return factory, []
    if factory.rest_of_line:
        return factory, [rest]
    args = rest.split(' ')
    if not all(args):
        raise ProtocolViolation("Arguments are separated by single spaces")
    return factory, args


class FrameReader(object):
    """
    Reads frames one at a time from a binary stream offering
    ``readline(limit)`` and ``read(n)``, such as a socket file.
    """

    def __init__(self, stream, max_line=MAX_LINE, max_body=MAX_BODY):
        self.stream = stream
        self.max_line = max_line
        self.max_body = max_body

    def _read_body(self, length):
        if length > self.max_body:
            raise ProtocolViolation("Body of %d bytes is too large" % length)
        chunks = []
        remaining = length
        while remaining:
            chunk = self.stream.read(remaining)
            if not chunk:
                raise ProtocolViolation("Stream ended %d bytes short of the body"
                                        % remaining)
            chunks.append(chunk)
            remaining -= len(chunk)
        return b''.join(chunks)

    def read_frame(self):
        """
        The next frame, or None at the end of the stream.
        """
        line = self.stream.readline(self.max_line + len(CRLF))
        if not line:
            return None
        if not line.endswith(CRLF):
            raise ProtocolViolation("Line is unterminated or too long")
        try:
            text = line[:-len(CRLF)].decode('utf-8')
        except UnicodeDecodeError:
            raise ProtocolViolation("Line is not UTF-8")
        factory, args = _split(text)
        try:
            if factory.has_body:
                body = self._read_body(factory.body_length(args))
                frame = factory.from_arguments(args, body)
            else:
                frame = factory.from_arguments(args)
        except ValueError as e:
            raise ProtocolViolation(str(e))
        logger.debug("Read %r", frame)
        return frame

    def __iter__(self):
        while True:
            frame = self.read_frame()
            if frame is None:
                break
            yield frame


def decode_frames(data):
    return list(FrameReader(io.BytesIO(data)))


def decode_frame(data):
    """
    The single frame encoded by ``data``.
    """
    stream = io.BytesIO(data)
    frame = FrameReader(stream).read_frame()
    if frame is None:
        raise ProtocolViolation("No frame")
    if stream.read(1):
        raise ProtocolViolation("Trailing bytes after the frame")
    return frame
