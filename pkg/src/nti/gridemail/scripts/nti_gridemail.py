#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The ``nti_gridemail`` command: simulations, the daemons, and the send
and fetch clients.

Arrival rates are per minute; the saturation point of the default login
cycle is ``1/60``.

.. $Id$
"""

from __future__ import division
from __future__ import print_function
from __future__ import absolute_import

import os
import sys
import codecs
import logging
import secrets
import argparse
import contextlib

import simplejson

from zope import component

from zope.interface import Invalid

from zope.configuration import xmlconfig

import nti.gridemail

from nti.gridemail import GRIDEMAIL_CONFIG
from nti.gridemail import MessageFactory as _

from nti.gridemail.interfaces import IAuditTrail
from nti.gridemail.interfaces import GridEmailError

from nti.gridemail.internalization import ConfigurationError

from nti.gridemail.internalization import load_catalog
from nti.gridemail.internalization import profile_from_external
from nti.gridemail.internalization import load_scoring_config

from nti.gridemail.model import Message

from nti.gridemail.model import compute_digest

from nti.gridemail.policies.config import PricingPolicyConfig

from nti.gridemail.policies.interfaces import POLICY_KINDS

from nti.gridemail.protocol.interfaces import DELIVERED
from nti.gridemail.protocol.interfaces import BUDGET_EXCEEDED
from nti.gridemail.protocol.interfaces import NO_SUITABLE_CLASS

from nti.gridemail.services.config import resolve
from nti.gridemail.services.config import load_config
from nti.gridemail.services.config import config_path
from nti.gridemail.services.config import parse_address

from nti.gridemail.services.identity import IdentityRegistry
from nti.gridemail.services.identity import compute_authenticator

from nti.gridemail.services.ledger import TokenLedger

from nti.gridemail.services.lines import PaymentClient
from nti.gridemail.services.lines import PaymentServer
from nti.gridemail.services.lines import IdentityServer

from nti.gridemail.services.receiver import ReceiverClient
from nti.gridemail.services.receiver import ReceiverServer
from nti.gridemail.services.receiver import ReceiverService

from nti.gridemail.services.sender import CONNECTION_FAILED

from nti.gridemail.services.sender import SenderClient
from nti.gridemail.services.sender import SenderServer
from nti.gridemail.services.sender import SenderService

from nti.gridemail.simulator.config import SimConfig

from nti.gridemail.simulator.cycle import simulate_cycle

from nti.gridemail.simulator.interfaces import METRIC_NAMES
from nti.gridemail.simulator.interfaces import SCENARIO_KINDS

from nti.gridemail.simulator.interfaces import ISimConfig

from nti.gridemail.simulator.scenarios import DEFAULT_PRICES
from nti.gridemail.simulator.scenarios import DEFAULT_POPULATION

from nti.gridemail.simulator.scenarios import get_scenario

from nti.gridemail.simulator.sweeps import COS_COLUMNS
from nti.gridemail.simulator.sweeps import PRICE_COLUMNS
from nti.gridemail.simulator.sweeps import LAMBDA_COLUMNS
from nti.gridemail.simulator.sweeps import DEFAULT_CYCLE_SIZE

from nti.gridemail.simulator.sweeps import sweep_price
from nti.gridemail.simulator.sweeps import sweep_lambda
from nti.gridemail.simulator.sweeps import run_cos_experiment

from nti.gridemail.simulator.tables import CSV_FORMAT
from nti.gridemail.simulator.tables import TABLE_FORMATS
from nti.gridemail.simulator.tables import SIMULATION_COLUMNS

from nti.gridemail.simulator.tables import write_table
from nti.gridemail.simulator.tables import simulation_row

TEXT_FORMAT = u'text'

#: The arrival rates of the default sweep, per minute
DEFAULT_LAMBDAS = (1.0 / 120, 1.0 / 90, 1.0 / 60, 1.0 / 45, 1.0 / 30)

DEFAULT_POLICIES = (u'accept-all', u'time-cap')

#: Documents ``validate-config`` understands
CONFIG_KINDS = ('catalog', 'scoring', 'receiver', 'sender', 'payment',
                'identity', 'client')

#: Exit status of ``send`` by outcome, then by rejection code
SEND_EXIT_OUTCOMES = {
    DELIVERED: 0,
    CONNECTION_FAILED: 1,
    BUDGET_EXCEEDED: 3,
    NO_SUITABLE_CLASS: 4,
}

SEND_EXIT_CODES = {
    401: 5,
    402: 6,
    403: 7,
    409: 8,
    429: 9,
    507: 10,
    550: 11,
}

logger = __import__('logging').getLogger(__name__)


def send_exit_status(outcome, code):
    """
    The exit status of ``send`` for a terminal outcome.
    """
    if outcome in SEND_EXIT_OUTCOMES:
        return SEND_EXIT_OUTCOMES[outcome]
    return SEND_EXIT_CODES.get(code, 1)


def _policy_names():
    return [kind.replace('_', '-') for kind in POLICY_KINDS]


def _rate(value):
    """
    A per-minute rate, also accepted as a fraction such as ``1/60``.
    """
    try:
        if '/' in value:
            numerator, denominator = value.split('/', 1)
            return float(numerator) / float(denominator)
        return float(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("invalid rate %r" % value)


def _rates(value):
    return [_rate(v) for v in value.split(',') if v]


def _floats(value):
    try:
        return [float(v) for v in value.split(',') if v]
    except ValueError:
        raise argparse.ArgumentTypeError("invalid number list %r" % value)


def _address(value):
    try:
        return parse_address(value)
    except ConfigurationError as e:
        raise argparse.ArgumentTypeError(str(e))


@contextlib.contextmanager
def _output(path, stdout):
    if not path or path == '-':
        yield stdout
        return
    with codecs.open(path, 'w', encoding='utf-8') as stream:
        yield stream
    logger.info("Wrote %s", path)


def _sim_config(args, **overrides):
    values = {'seed': args.seed,
              'replications': args.replications,
              'cycle_minutes': args.cycle_minutes,
              'mean_read_minutes': args.mean_read,
              'exclusive_budget_minutes': args.budget_minutes,
              'opportunity_rate': args.opportunity_rate}
    values.update(overrides)
    return SimConfig(**values)


def _pricing(args, cfg):
    return PricingPolicyConfig(kind=args.policy.replace('-', '_'),
                               base_price=args.price,
                               congestion_slope=args.congestion_slope,
                               price_floor=args.price_floor,
                               price_ceiling=args.price_ceiling,
                               time_cap_minutes=cfg.exclusive_budget_minutes,
                               opportunity_rate=cfg.opportunity_rate)


def _print_metrics(row, stdout):
    print(u'%-22s %s' % (u'policy', row['policy']), file=stdout)
    print(u'%-22s %r' % (u'lambda', row['lambda']), file=stdout)
    print(u'%-22s %d' % (u'replications', row['replications']), file=stdout)
    for name in METRIC_NAMES:
        print(u'%-22s %16.6f  +/- %.6f' % (name, row[name], row[name + '_stderr']),
              file=stdout)


def do_simulate(args, stdout):
    cfg = _sim_config(args, lambda_per_min=args.lambda_per_min)
    policy = _pricing(args, cfg)
    scenario = get_scenario(args.scenario) if args.scenario else None
    result = simulate_cycle(cfg, policy, scenario=scenario, jobs=args.jobs)
    row = simulation_row(policy.kind, cfg, result)
    if args.format == TEXT_FORMAT:
        with _output(args.output, stdout) as stream:
            _print_metrics(row, stream)
    else:
        with _output(args.output, stdout) as stream:
            write_table([row], SIMULATION_COLUMNS, stream, args.format)
    return 0


def do_sweep_lambda(args, stdout):
    cfg = _sim_config(args)
    rows = sweep_lambda(cfg, args.lambdas or DEFAULT_LAMBDAS,
                        args.policies or DEFAULT_POLICIES, jobs=args.jobs)
    with _output(args.output, stdout) as stream:
        write_table(rows, LAMBDA_COLUMNS, stream, args.format)
    return 0


def do_sweep_price(args, stdout):
    rows = sweep_price(get_scenario(args.scenario),
                       args.prices or DEFAULT_PRICES,
                       seed=args.seed, size=args.size)
    with _output(args.output, stdout) as stream:
        write_table(rows, PRICE_COLUMNS, stream, args.format)
    return 0


def do_cos_experiment(args, stdout):
    scenario = get_scenario(args.scenario) if args.scenario else None
    catalog = load_catalog(args.catalog) if args.catalog else None
    result = run_cos_experiment(catalog=catalog, scenario=scenario,
                                seed=args.seed, size=args.size,
                                cycle_size=args.cycle_size,
                                baseline_price=args.baseline_price)
    with _output(args.output, stdout) as stream:
        write_table(result.rows(), COS_COLUMNS, stream, args.format)
    return 0


def _load(kind, args):
    path = config_path(args.config)
    return load_config(kind, path), path


def do_serve_payment(args, unused_stdout):
    config, path = _load('payment', args)
    ledger_path = None
    if config.data_dir:
        ledger_path = os.path.join(resolve(path, config.data_dir), 'ledger.jsonl')
    PaymentServer(config.listen, TokenLedger(ledger_path)).run()
    return 0


def do_serve_identity(args, unused_stdout):
    config, unused_path = _load('identity', args)
    IdentityServer(config.listen, IdentityRegistry(config.secrets)).run()
    return 0


def do_serve_receiver(args, unused_stdout):
    config, path = _load('receiver', args)
    ReceiverServer(config.listen, ReceiverService.from_config(config, path)).run()
    return 0


def do_serve_sender(args, unused_stdout):
    config, unused_path = _load('sender', args)
    SenderServer(config.listen, SenderService.from_config(config)).run()
    return 0


def _client_config(args):
    path = args.config or os.environ.get(GRIDEMAIL_CONFIG)
    return load_config('client', path) if path else None


def _peer(args, client, name):
    value = getattr(args, name)
    if value is None and client is not None:
        value = getattr(client, name)
    return value


def _body(args):
    if args.body_file:
        with open(args.body_file, 'rb') as f:
            return f.read()
    return (args.body or u'').encode('utf-8')


def _profile_ext(args):
    result = {'budget': args.budget}
    if args.max_latency is not None:
        result['max_latency_s'] = args.max_latency
    if args.qos:
        result['required_qos'] = simplejson.loads(args.qos)
    return result


def _message(args):
    body = _body(args)
    kwargs = {'id': args.message_id or secrets.token_hex(8),
              'sender_id': args.sender_id,
              'recipient_id': args.recipient_id,
              'format_tag': args.format_tag,
              'body': body}
    if args.stamp:
        kwargs['stamp'] = args.stamp
    if args.secret:
        kwargs['authenticator'] = compute_authenticator(args.secret,
                                                        compute_digest(body))
    return Message(**kwargs)


def do_send(args, stdout, parser):
    client = _client_config(args)
    receiver = _peer(args, client, 'receiver')
    sender = _peer(args, client, 'sender')
    payment = _peer(args, client, 'payment')
    if receiver is None:
        parser.error(_(u"send needs --receiver"))
    if sender is None and payment is None:
        parser.error(_(u"send needs --sender or --payment"))
    try:
        profile_ext = _profile_ext(args)
    except ValueError:
        parser.error(_(u"--qos must be a JSON object"))
    message = _message(args)
    if sender is not None:
        try:
            outcome, code = SenderClient(sender).submit(receiver, profile_ext,
                                                        message)
        except OSError as e:
            logger.error("Cannot reach the sender at %s: %s", sender, e)
            outcome, code = CONNECTION_FAILED, None
    else:
        profile = profile_from_external(profile_ext)
        retry = client.retry if client is not None else None
        service = SenderService(PaymentClient(payment), retry=retry)
        try:
            feedback = service.send(receiver, profile, message)
            outcome, code = feedback.outcome, feedback.code
        except OSError as e:
            logger.error("Cannot reach the receiver at %s: %s", receiver, e)
            outcome, code = CONNECTION_FAILED, None
    print(u'%s %s %s' % (message.id, outcome, u'-' if code is None else code),
          file=stdout)
    return send_exit_status(outcome, code)


def do_fetch(args, stdout, parser):
    client = _client_config(args)
    receiver = _peer(args, client, 'receiver')
    if receiver is None:
        parser.error(_(u"fetch needs --receiver"))
    messages = ReceiverClient(receiver).fetch(args.cos_id, args.recipient_id,
                                              args.credential, args.max)
    for message in messages:
        print(u'MESSAGE %s %s %s %d' % (message.message_id, message.sender_id,
                                        message.format_tag, len(message.body)),
              file=stdout)
        print(message.body.decode('utf-8', 'replace'), file=stdout)
    print(u'END %d' % len(messages), file=stdout)
    return 0


def do_validate_config(args, stdout):
    if args.kind == 'catalog':
        catalog = load_catalog(args.path)
        detail = u'%d classes' % len(catalog)
    elif args.kind == 'scoring':
        load_scoring_config(args.path)
        detail = u'scoring'
    else:
        load_config(args.kind, args.path)
        detail = args.kind
    print(u'OK %s (%s)' % (args.path, detail), file=stdout)
    return 0


def _add_simulation_flags(parser):
    parser.add_argument('--seed', type=int, required=True,
                        help=_(u"Generator seed"))
    parser.add_argument('--replications', type=int,
                        default=ISimConfig['replications'].default,
                        help=_(u"Independent login cycles"))
    parser.add_argument('--cycle-minutes', type=float,
                        default=ISimConfig['cycle_minutes'].default,
                        dest='cycle_minutes', help=_(u"Minutes between logins"))
    parser.add_argument('--mean-read', type=float,
                        default=ISimConfig['mean_read_minutes'].default,
                        dest='mean_read', help=_(u"Mean reading minutes"))
    parser.add_argument('--budget-minutes', type=float,
                        default=ISimConfig['exclusive_budget_minutes'].default,
                        dest='budget_minutes',
                        help=_(u"Exclusive reading budget"))
    parser.add_argument('--opportunity-rate', type=float,
                        default=ISimConfig['opportunity_rate'].default,
                        dest='opportunity_rate',
                        help=_(u"Benefit forgone per minute past the budget"))
    parser.add_argument('--jobs', type=int, default=1,
                        help=_(u"Worker processes"))


def _add_output_flags(parser, formats=TABLE_FORMATS, default=CSV_FORMAT):
    parser.add_argument('--output', '-o',
                        help=_(u"Output file; standard output by default"))
    parser.add_argument('--format', choices=formats, default=default,
                        help=_(u"Output format"))


def _add_config_flag(parser, required=False):
    parser.add_argument('--config', '-c', required=required,
                        help=_(u"Configuration document; defaults to $GRIDEMAIL_CONFIG"))


def build_parser():
    parser = argparse.ArgumentParser(prog='nti_gridemail',
                                     description=_(u"Class-of-service email"))
    parser.add_argument('-v', '--verbose', help=_(u"Be verbose"),
                        action='store_true', dest='verbose')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    simulate = commands.add_parser('simulate', help=_(u"Simulate login cycles"))
    simulate.add_argument('--lambda', type=_rate, required=True,
                          dest='lambda_per_min',
                          help=_(u"Arrival rate per minute, e.g. 1/60"))
    simulate.add_argument('--policy', choices=_policy_names(),
                          default=u'accept-all')
    simulate.add_argument('--price', type=float, default=0.0,
                          help=_(u"Base price of priced policies"))
    simulate.add_argument('--congestion-slope', type=float, default=0.0,
                          dest='congestion_slope')
    simulate.add_argument('--price-floor', type=float, default=0.0,
                          dest='price_floor')
    simulate.add_argument('--price-ceiling', type=float, default=None,
                          dest='price_ceiling')
    simulate.add_argument('--scenario', choices=SCENARIO_KINDS,
                          help=_(u"Senders pay only what their benefit allows"))
    _add_simulation_flags(simulate)
    _add_output_flags(simulate, (TEXT_FORMAT,) + TABLE_FORMATS, TEXT_FORMAT)
    simulate.set_defaults(handler=do_simulate)

    lambdas = commands.add_parser('sweep-lambda',
                                  help=_(u"Net benefit against the arrival rate"))
    lambdas.add_argument('--lambdas', type=_rates,
                         help=_(u"Comma separated rates per minute"))
    lambdas.add_argument('--policies', type=lambda v: v.split(','),
                         help=_(u"Comma separated policies"))
    _add_simulation_flags(lambdas)
    _add_output_flags(lambdas)
    lambdas.set_defaults(handler=do_sweep_lambda)

    prices = commands.add_parser('sweep-price',
                                 help=_(u"Accepted benefit against the price"))
    prices.add_argument('--scenario', choices=SCENARIO_KINDS,
                        default=SCENARIO_KINDS[0])
    prices.add_argument('--prices', type=_floats,
                        help=_(u"Comma separated ascending prices"))
    prices.add_argument('--seed', type=int, required=True)
    prices.add_argument('--size', type=int, default=DEFAULT_POPULATION)
    _add_output_flags(prices)
    prices.set_defaults(handler=do_sweep_price)

    experiment = commands.add_parser('cos-experiment',
                                     help=_(u"Three classes against one price"))
    experiment.add_argument('--seed', type=int, required=True)
    experiment.add_argument('--size', type=int, default=DEFAULT_POPULATION)
    experiment.add_argument('--cycle-size', type=int, default=DEFAULT_CYCLE_SIZE,
                            dest='cycle_size')
    experiment.add_argument('--baseline-price', type=float, default=5.0,
                            dest='baseline_price')
    experiment.add_argument('--scenario', choices=SCENARIO_KINDS)
    experiment.add_argument('--catalog', help=_(u"Catalog document"))
    _add_output_flags(experiment)
    experiment.set_defaults(handler=do_cos_experiment)

    for name, handler in (('serve-receiver', do_serve_receiver),
                          ('serve-sender', do_serve_sender),
                          ('serve-payment', do_serve_payment),
                          ('serve-identity', do_serve_identity)):
        serve = commands.add_parser(name, help=_(u"Run a daemon"))
        _add_config_flag(serve)
        serve.set_defaults(handler=handler)

    send = commands.add_parser('send', help=_(u"Send one message"))
    _add_config_flag(send)
    send.add_argument('--receiver', type=_address)
    send.add_argument('--sender', type=_address,
                      help=_(u"A sender daemon; otherwise send in process"))
    send.add_argument('--payment', type=_address)
    send.add_argument('--from', required=True, dest='sender_id')
    send.add_argument('--to', required=True, dest='recipient_id')
    send.add_argument('--id', dest='message_id')
    body = send.add_mutually_exclusive_group(required=True)
    body.add_argument('--body')
    body.add_argument('--body-file', dest='body_file')
    send.add_argument('--format-tag', default=u'plain', dest='format_tag')
    send.add_argument('--budget', type=float, default=0.0)
    send.add_argument('--max-latency', type=float, dest='max_latency')
    send.add_argument('--qos', help=_(u"Required QoS as a JSON object"))
    send.add_argument('--stamp')
    send.add_argument('--secret', help=_(u"Shared secret to authenticate with"))
    send.set_defaults(handler=do_send, needs_parser=True)

    fetch = commands.add_parser('fetch', help=_(u"Retrieve queued messages"))
    _add_config_flag(fetch)
    fetch.add_argument('--receiver', type=_address)
    fetch.add_argument('--cos', required=True, dest='cos_id')
    fetch.add_argument('--recipient', required=True, dest='recipient_id')
    fetch.add_argument('--credential', required=True)
    fetch.add_argument('--max', type=int, default=10)
    fetch.set_defaults(handler=do_fetch, needs_parser=True)

    validate = commands.add_parser('validate-config',
                                   help=_(u"Check a configuration document"))
    validate.add_argument('--kind', choices=CONFIG_KINDS, required=True)
    validate.add_argument('path')
    validate.set_defaults(handler=do_validate_config)
    return parser


def _configure_logging(verbose):
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s [%(name)s] %(message)s')


def configure_components():
    """
    Load the package configuration: the audit trail and the event
    subscribers. Loading twice into one registry is a no-op.
    """
    if component.queryUtility(IAuditTrail) is None:
        xmlconfig.file('configure.zcml', package=nti.gridemail)
        logger.debug("Loaded the nti.gridemail configuration")


def run_command(argv, stdout=None, stderr=None):
    """
    Run one command line.

    :return: The exit status: 0 on success, 2 for usage errors and 1 for
        runtime failures, or the ``send`` outcome status.
    """
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    _configure_logging(args.verbose)
    try:
        configure_components()
        if getattr(args, 'needs_parser', False):
            return args.handler(args, stdout, parser)
        return args.handler(args, stdout)
    except SystemExit as e:
        return e.code
    except GridEmailError as e:
        print(u'error: %s %s' % (e.code, e), file=stderr)
    except (Invalid, ValueError, OSError) as e:
        print(u'error: %s' % (e,), file=stderr)
    return 1


def main(args=None):
    sys.exit(run_command(sys.argv[1:] if args is None else args))


if __name__ == '__main__':  # pragma: no cover
    main()
