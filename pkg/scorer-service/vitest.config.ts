import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the protocol tests spawn the built server as a child process
    testTimeout: 20000,
  },
});
