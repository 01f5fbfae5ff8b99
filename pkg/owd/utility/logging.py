import sys


class Logger(object):
    def __init__(self, log_file: str) -> None:
        if not log_file:
            self.log_file = sys.stderr
        else:
            self.log_file = open(log_file, "a")

    def write_to_file(self, args: dict):
        line = f'{args["command"]} Time: {args["time"]:.3f}s'
        if args.get("model"):
            line += f' Model: {args["model"]}'
        if "failed" in args:
            line += ' Failed: {}'.format(','.join(args["failed"]) or 'none')
        print(line, file=self.log_file)
        if self.log_file is not sys.stderr:
            self.log_file.flush()
