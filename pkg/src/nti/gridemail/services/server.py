#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Threaded TCP daemons.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import threading
import socketserver

from nti.gridemail.services.config import Address

logger = __import__('logging').getLogger(__name__)


class _ConnectionHandler(socketserver.StreamRequestHandler):

    def handle(self):
        peer = '%s:%s' % self.client_address[:2]
        logger.debug("Connection from %s", peer)
        try:
            self.server.handle_connection(self.rfile, self.wfile)
        except (OSError, EOFError):
            logger.debug("Connection from %s dropped", peer)
        except Exception:  # pylint: disable=broad-except
            logger.exception("Failed serving %s", peer)


class ServiceServer(socketserver.ThreadingTCPServer):
    """
    One thread per connection; subclasses implement
    ``handle_connection(rfile, wfile)``.
    """

    allow_reuse_address = True
    daemon_threads = True
    request_queue_size = 128

    name = 'service'

    def __init__(self, address):
        socketserver.ThreadingTCPServer.__init__(self, address.as_tuple(),
                                                 _ConnectionHandler)
        self._thread = None

    @property
    def address(self):
        """
        The bound address; a configured port 0 becomes the real port.
        """
        host, port = self.server_address[:2]
        return Address(host=host, port=port)

    def handle_connection(self, rfile, wfile):
        raise NotImplementedError()

    def start(self):
        """
        Serve from a background thread.
        """
        self._thread = threading.Thread(target=self.serve_forever,
                                        name='%s-%s' % (self.name, self.address.port))
        self._thread.daemon = True
        self._thread.start()
        logger.info("Started %s on %s", self.name, self.address)
        return self

    def stop(self):
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join()
            self._thread = None
        logger.info("Stopped %s", self.name)

    def run(self):
        """
        Serve from this thread until interrupted.
        """
        logger.info("Serving %s on %s", self.name, self.address)
        try:
            self.serve_forever()
        except KeyboardInterrupt:
            logger.info("Interrupted")
        finally:
            self.server_close()
            logger.info("Stopped %s", self.name)
