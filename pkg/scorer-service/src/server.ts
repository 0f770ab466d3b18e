import net from "node:net";
import readline from "node:readline";

import { handleLine, replyToLine, ScoreFn } from "./frames";
import { loadModel, scoreWithModel } from "./model";

interface ServeArgs {
  transport: "stdio" | "tcp";
  port: number;
  modelPath: string;
}

const USAGE =
  "usage: server --model FILE (--stdio | --tcp PORT)\n" +
  "  --stdio      answer frames on stdin/stdout\n" +
  "  --tcp PORT   listen on 127.0.0.1:PORT (0 picks a free port)\n";

function parseArgs(argv: string[]): ServeArgs {
  let transport: "stdio" | "tcp" | null = null;
  let port = 0;
  let modelPath = "";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--stdio") {
      transport = "stdio";
    } else if (arg === "--tcp") {
      transport = "tcp";
      const value = argv[++i];
      port = Number(value);
      if (!Number.isInteger(port) || port < 0 || port > 65535) {
        throw new Error(`bad port: ${value}`);
      }
    } else if (arg === "--model") {
      modelPath = argv[++i] ?? "";
    } else {
      throw new Error(`unknown argument: ${arg}`);
    }
  }
  if (transport === null) throw new Error("one of --stdio or --tcp is required");
  if (modelPath === "") throw new Error("--model is required");
  return { transport, port, modelPath };
}

function serveStdio(score: ScoreFn): void {
  const rl = readline.createInterface({ input: process.stdin });
  rl.on("line", (line) => {
    const reply = handleLine(line, score);
    if (reply !== null) process.stdout.write(replyToLine(reply));
  });
  rl.on("close", () => process.exit(0));
}

function serveTcp(score: ScoreFn, port: number): void {
  const server = net.createServer((socket) => {
    let buffer = "";
    const answer = (line: string) => {
      const reply = handleLine(line, score);
      if (reply !== null && socket.writable) socket.write(replyToLine(reply));
    };
    socket.on("data", (chunk) => {
      buffer += chunk.toString("utf8");
      let cut;
      while ((cut = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, cut);
        buffer = buffer.slice(cut + 1);
        answer(line);
      }
    });
    socket.on("end", () => {
      if (buffer.trim() !== "") answer(buffer);
      buffer = "";
    });
    // a client vanishing mid-frame must not take the server down
    socket.on("error", () => socket.destroy());
  });
  server.listen(port, "127.0.0.1", () => {
    const address = server.address() as net.AddressInfo;
    process.stderr.write(`listening ${address.port}\n`);
  });
}

function main(): void {
  let args: ServeArgs;
  try {
    args = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : err}\n${USAGE}`);
    process.exit(2);
  }

  let score: ScoreFn;
  try {
    const model = loadModel(args.modelPath);
    score = (req) => scoreWithModel(model, req);
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : err}\n`);
    process.exit(2);
  }

  process.on("uncaughtException", (err) => {
    process.stderr.write(`uncaught: ${err.stack ?? err.message}\n`);
  });

  if (args.transport === "stdio") serveStdio(score);
  else serveTcp(score, args.port);
}

if (require.main === module) {
  main();
}
