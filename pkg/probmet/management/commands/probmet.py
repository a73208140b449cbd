import logging

from django.core.management.base import BaseCommand, CommandError

from probmet import cli
from probmet.types import ExitStatus, Form, Verb

#: ``--verbosity`` onto the level of the ``probmet`` logger.
VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.WARNING, 2: logging.INFO}


class Command(BaseCommand):
    help = "Verify, convert and construct finite probabilistic metric spaces."
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("verb", choices=[verb.value for verb in Verb])
        parser.add_argument("inputs", nargs="*", metavar="FILE")
        parser.add_argument(
            "--set", dest="subset", metavar="A,B", help="comma-separated point ids"
        )
        parser.add_argument("--point", metavar="X")
        parser.add_argument(
            "--map",
            dest="maps",
            action="append",
            default=[],
            metavar="FILE",
            help="morphism file; repeat for lift",
        )
        parser.add_argument("--to", choices=[Form.LEVELS.value, Form.DDF.value])
        parser.add_argument(
            "--out", metavar="PATH", help="output file, or directory for witness"
        )

    def handle(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options["verbosity"], logging.DEBUG)
        logging.getLogger("probmet").setLevel(level)
        command = cli.Command(
            verb=options["verb"],
            inputs=options["inputs"],
            subset=options["subset"],
            point=options["point"],
            maps=options["maps"],
            to=options["to"],
            out=options["out"],
        )
        outcome = cli.run(command)
        for path, content in outcome.files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content, encoding="utf-8")
        if outcome.text:
            self.stdout.write(outcome.text, ending="")
        if outcome.status != ExitStatus.OK:
            raise CommandError(outcome.message, returncode=outcome.status)
