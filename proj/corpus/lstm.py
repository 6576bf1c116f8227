# Stacked LSTM sentiment classifier (IMDB / SST-2).
from tensorflow import keras
from tensorflow.keras import layers

VOCAB_SIZE = 10000
MAX_LEN = 200
EPOCHS = 10


class LSTMClassifier(keras.Model):
    def __init__(self):
        super().__init__()
        self.embedding = layers.Embedding(VOCAB_SIZE, 128)
        self.lstm1 = layers.LSTM(64, return_sequences=True)
        self.dropout = layers.Dropout(0.3)
        self.lstm2 = layers.LSTM(32)
        self.dense = layers.Dense(64, activation='relu')
        self.classifier = layers.Dense(2, activation='softmax')

    def call(self, inputs):
        x = self.embedding(inputs)
        x = self.lstm1(x)
        x = self.dropout(x)
        x = self.lstm2(x)
        x = self.dense(x)
        return self.classifier(x)


model = LSTMClassifier()
model.build((None, MAX_LEN))
model.compile(optimizer=keras.optimizers.Adam(learning_rate=1e-3),
              loss='sparse_categorical_crossentropy',
              metrics=['accuracy'])
