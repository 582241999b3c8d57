import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/e2e.test.ts"],
    environment: "node",
    globalSetup: "tests/e2e.setup.ts",
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
