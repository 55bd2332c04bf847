import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    testTimeout: 180000,
    hookTimeout: 120000,
  },
});
