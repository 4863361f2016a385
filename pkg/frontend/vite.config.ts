import { defineConfig } from "vitest/config";

const service = "http://127.0.0.1:8000";

export default defineConfig({
  server: {
    // the ontopop service; run `ontopop serve --port 8000 ...` alongside
    proxy: Object.fromEntries(
      ["/health", "/template", "/complete", "/cells", "/validate", "/expand", "/export"].map(
        (path) => [path, service],
      ),
    ),
  },
  test: {
    environment: "jsdom",
  },
});
