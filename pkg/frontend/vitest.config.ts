import { defineConfig } from "vitest/config"

export default defineConfig({
    test: {
        include: process.env.RUN_INTEGRATION
            ? ["test/integration.test.ts"]
            : ["test/state.test.ts", "test/render.test.ts", "test/api.test.ts"],
        environment: "node",
    },
})
