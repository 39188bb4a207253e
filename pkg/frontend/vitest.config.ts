import { defineConfig } from "vitest/config";

export default defineConfig({
  resolve: {
    // source files import with .js extensions (browser ESM); map them back
    // to the .ts sources for the test runner
    alias: [{ find: /^(\.{1,2}\/.*)\.js$/, replacement: "$1.ts" }],
  },
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
  },
});
